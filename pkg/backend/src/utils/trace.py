import io
import json
import os
import threading

import zstandard as zstd


class TraceEvent:
    """
        One audit event: stage number, event kind and a JSON-compatible payload.
    """

    def __init__(self, stage: int, kind: str, payload: dict = None):
        self.stage = stage
        self.kind = kind
        self.payload = payload or {}

    def __repr__(self):
        payload = str(self.payload)[:min(50, len(str(self.payload)))]
        return f"[TraceEvent<{self.kind}>@{self.stage}]: {payload}"

    def __eq__(self, other):
        return isinstance(other, TraceEvent) and self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        return {"stage": self.stage, "kind": self.kind, "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(line: str):
        data = json.loads(line)
        if "stage" not in data or "kind" not in data:
            raise ValueError(f"Invalid trace line: {line!r}")
        return TraceEvent(data["stage"], data["kind"], data.get("payload"))


class TraceWriter:
    """
        Append-only JSON-lines sink, usable as a context manager.

        Paths ending in ``.zst`` are compressed with zstandard. A writer opened
        with ``path=None`` only keeps the events in memory.
    """

    def __init__(self, path: str = None):
        self.path = path
        self.events: list[TraceEvent] = []
        self._lock = threading.Lock()
        self._handle = None
        self._raw = None

    def __enter__(self):
        if self.path is not None:
            os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
            self._raw = open(self.path, "wb")
            if self.path.endswith(".zst"):
                stream = zstd.ZstdCompressor(level=10).stream_writer(self._raw)
                self._handle = io.TextIOWrapper(stream, encoding="utf-8")
            else:
                self._handle = io.TextIOWrapper(self._raw, encoding="utf-8")
        return self

    def __exit__(self, *exc):
        if self._handle is not None:
            self._handle.flush()
            self._handle.close()
            self._handle = None
            self._raw = None
        return False

    def emit(self, stage: int, kind: str, **payload) -> TraceEvent:
        event = TraceEvent(stage, kind, payload)
        with self._lock:
            self.events.append(event)
            if self._handle is not None:
                self._handle.write(event.to_json() + "\n")
        return event

    def extend(self, events):
        for event in events:
            self.emit(event.stage, event.kind, **event.payload)

    def of_kind(self, kind: str) -> list:
        return [event for event in self.events if event.kind == kind]


def read_trace(path: str):
    """
    Stream the events of a trace file, compressed or not.

    :param path: path to a .jsonl or .jsonl.zst file
    :type path: str
    :return: generator of TraceEvent
    """
    with open(path, "rb") as raw:
        if path.endswith(".zst"):
            stream = zstd.ZstdDecompressor().stream_reader(raw)
            text = io.TextIOWrapper(stream, encoding="utf-8")
        else:
            text = io.TextIOWrapper(raw, encoding="utf-8")
        for line in text:
            line = line.strip()
            if line:
                yield TraceEvent.from_json(line)
