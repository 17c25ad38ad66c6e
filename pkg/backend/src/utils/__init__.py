"""Console styling and audit-trace helpers."""

from .console import Style, log
from .trace import TraceEvent, TraceWriter, read_trace

__all__ = ["Style", "log", "TraceEvent", "TraceWriter", "read_trace"]
