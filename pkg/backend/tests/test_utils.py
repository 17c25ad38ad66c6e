from __future__ import annotations

import pytest

from src.errors import OrderError
from src.utils.console import Style, log
from src.utils.trace import TraceEvent, TraceWriter, read_trace


def test_style_wraps_on_words():
    assert Style("INFO", "one two three four", auto_break=True, max_length=9).message == "one two\nthree\nfour"
    with pytest.raises(ValueError):
        Style("INFO", "text", auto_break=True)
    with pytest.raises(ValueError):
        Style("LOUD", "text")


def test_no_color_gives_plain_text():
    assert str(Style("ERROR", "plain")) == "plain"


def test_log_goes_to_stderr(capsys, monkeypatch):
    monkeypatch.delenv("ORDLAB_DEBUG", raising=False)
    log("info", "Order", "explored")
    log("debug", "Order", "hidden")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "[Order] explored" in captured.err
    assert "hidden" not in captured.err


def test_errors_carry_component_and_detail():
    error = OrderError("Unknown order <x>", "expected a file")
    assert error.headline == "Unknown order <x>"
    assert error.to_json() == {"error": "OrderError", "message": "Unknown order <x>", "detail": "expected a file"}
    assert "[Order]" in error.message


@pytest.mark.parametrize("name", ["trace.jsonl", "trace.jsonl.zst"])
def test_trace_round_trip(tmp_path, name):
    path = str(tmp_path / "traces" / name)
    with TraceWriter(path) as trace:
        trace.emit(0, "add", element=3)
        trace.emit(1, "retract", element=3)
    assert list(read_trace(path)) == trace.events
    assert [event.kind for event in trace.events] == ["add", "retract"]


def test_in_memory_trace():
    trace = TraceWriter()
    trace.extend([TraceEvent(2, "grow", {"block": 0})])
    assert trace.of_kind("grow")[0].payload == {"block": 0}
    with pytest.raises(ValueError):
        TraceEvent.from_json('{"kind": "add"}')
