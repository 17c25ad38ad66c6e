"""
Registry of total programs: the index e of a limit notation 3·5^e points here.

Entries are append-only and deduplicated on their canonical text, so the same
sequence of registrations always hands out the same indices. A registry opened
on a path replays the existing JSON lines and appends new entries to the file.
"""
from __future__ import annotations

import importlib
import json
import os
import threading
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from src.errors import ProgramError, RegistryError
from src.logic.evaluate import HostUnknown, host_function
from src.orders.program import Expr, Fuel, opcode, parse_program, program_text, run
from src.utils.console import log

ENTRY_KINDS: Dict[str, Callable[["RegistryEntry", int, int], int]] = {}
"""
Resolvers by entry kind. A resolver gets the entry, the argument n and a program budget
and returns {e}(n) as a natural number.
"""

_EXTENSIONS = ("src.progressions.notations",)


def _resolve_kind(kind: str):
    if kind not in ENTRY_KINDS:
        for module in _EXTENSIONS:
            importlib.import_module(module)
    if kind not in ENTRY_KINDS:
        raise RegistryError(f"Unknown registry entry kind <{kind}>")
    return ENTRY_KINDS[kind]


def entry_kind(name: str):
    def decorator(fn):
        ENTRY_KINDS[name] = fn
        return fn

    return decorator


@dataclass(frozen=True)
class RegistryEntry:
    index: int
    kind: str
    program: Expr

    @property
    def text(self) -> str:
        return program_text(self.program)

    def to_json(self) -> str:
        return json.dumps({"index": self.index, "kind": self.kind, "program": self.text}, separators=(",", ":"))

    @staticmethod
    def from_json(line: str) -> "RegistryEntry":
        data = json.loads(line)
        return RegistryEntry(int(data["index"]), data["kind"], parse_program(data["program"]))


class ProgramRegistry:
    """
        Append-only table of programs in the variable ``n``.

        ``register`` is the only mutating call and runs under the registry lock.
        ``memo`` holds notations and ordinals computed against this registry.
    """

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self.entries: List[RegistryEntry] = []
        self._by_text: Dict[tuple, int] = {}
        self.memo: Dict[tuple, object] = {}
        self._lock = threading.RLock()
        if path is not None and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as handle:
                for number, line in enumerate(handle):
                    if not line.strip():
                        continue
                    entry = RegistryEntry.from_json(line)
                    if entry.index != len(self.entries):
                        raise RegistryError(f"Registry {path} is not contiguous", f"line {number + 1} has index {entry.index}")
                    self._append(entry)
            log("debug", "Registry", f"Loaded {len(self.entries)} programs from {path}")

    def __len__(self):
        return len(self.entries)

    def _append(self, entry: RegistryEntry):
        self.entries.append(entry)
        self._by_text[(entry.kind, entry.text)] = entry.index

    def register(self, program: Expr, kind: str = "program") -> int:
        """Index of ``program``, allocating the next free one on first sight."""
        _resolve_kind(kind)
        key = (kind, program_text(program))
        with self._lock:
            if key in self._by_text:
                return self._by_text[key]
            entry = RegistryEntry(len(self.entries), kind, parse_program(key[1]))
            self._append(entry)
            if self.path is not None:
                os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as handle:
                    handle.write(entry.to_json() + "\n")
            log("debug", "Registry", f"Registered {kind} #{entry.index}: {key[1][:60]}")
            return entry.index

    def entry(self, e: int) -> RegistryEntry:
        """
        :raises RegistryError: when ``e`` was never allocated
        """
        with self._lock:
            if not 0 <= e < len(self.entries):
                raise RegistryError(f"Unresolvable registry index {e}", f"{len(self.entries)} programs registered")
            return self.entries[e]

    def call(self, e: int, n: int, budget: int = 200_000) -> int:
        entry = self.entry(e)
        return _resolve_kind(entry.kind)(entry, n, budget)


@entry_kind("program")
def _numeric(entry: RegistryEntry, n: int, budget: int) -> int:
    return run(entry.program, {"n": n}, Fuel(budget))


_default = ProgramRegistry()
_default_lock = threading.Lock()


def default_registry() -> ProgramRegistry:
    with _default_lock:
        return _default


def use_registry(registry: ProgramRegistry) -> ProgramRegistry:
    """Make ``registry`` the one behind ``call``; returns the previous one."""
    global _default
    with _default_lock:
        previous, _default = _default, registry
    return previous


@opcode("call")
def _call_opcode(args, env, fuel):
    e, n = args
    return default_registry().call(run(e, env, fuel), run(n, env, fuel), fuel.left)


@host_function("call")
def _call_host(evaluator, e, n):
    try:
        return default_registry().call(e, n, evaluator.program_fuel)
    except (ProgramError, RegistryError) as exc:
        raise HostUnknown(exc.headline) from None
