from __future__ import annotations

import pytest

from src.orders.constructors import finite_chain
from src.progressions.registry import ProgramRegistry, use_registry


@pytest.fixture
def registry():
    """A fresh in-memory registry behind ``call`` for the duration of one test."""
    fresh = ProgramRegistry()
    previous = use_registry(fresh)
    yield fresh
    use_registry(previous)


@pytest.fixture
def chain2():
    return finite_chain(2)


@pytest.fixture(autouse=True)
def plain_console(monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
