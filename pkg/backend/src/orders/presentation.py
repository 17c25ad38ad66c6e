"""
Serialized presentations of computable linear orders.

A presentation is a closed s-expression::

    (presentation (name omega)
                  (compare (<= x y))
                  (successor (= y (+ x 1)))
                  (first 0)
                  (fuel 200000))

``compare`` reads ``x`` and ``y`` and decides x <= y; the universe is
{x : x <= x}. The optional components are ``successor`` (x, y), ``limit`` (x),
``first`` and ``last`` (closed, returning a code), ``fs`` (x, n: the n-th term
of the fundamental sequence of a limit point x), ``predecessor`` (x, returning
the code plus one, 0 when there is none) and ``universe-bound`` (every member
code lies below it).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace
from functools import cmp_to_key, lru_cache
from typing import Dict, Optional, Tuple

from src.errors import FuelExhaustedError, LinearityError, OrderError, ProgramSyntaxError
from src.logic.evaluate import HostUnknown, host_relation
from src.orders.finite import FiniteOrder
from src.orders.program import Expr, Fuel, parse_program, program_text, run

COMPONENTS = ("compare", "successor", "limit", "first", "last", "fs", "predecessor")


@dataclass(frozen=True)
class OrderPresentation:
    name: str
    compare: Expr
    successor: Optional[Expr] = None
    limit: Optional[Expr] = None
    first: Optional[Expr] = None
    last: Optional[Expr] = None
    fs: Optional[Expr] = None
    predecessor: Optional[Expr] = None
    fuel: int = 200_000
    universe_bound: Optional[int] = None
    _cache: Dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, hash=False, repr=False)

    # -- running components

    def _run(self, component: str, **env) -> int:
        program = getattr(self, component)
        if program is None:
            raise OrderError(f"Presentation <{self.name}> has no {component} component")
        return run(program, env, Fuel(self.fuel))

    def leq(self, x: int, y: int) -> bool:
        key = (x, y)
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            cached = self._run("compare", x=x, y=y) != 0
            with self._lock:
                self._cache[key] = cached
        return cached

    def less(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def member(self, x: int) -> bool:
        if self.universe_bound is not None and x >= self.universe_bound:
            return False
        return self.leq(x, x)

    def has(self, component: str) -> bool:
        return getattr(self, component) is not None

    @property
    def structured(self) -> bool:
        """Exposes successor, limit, first, last and fundamental sequences."""
        return all(self.has(c) for c in ("successor", "limit", "first", "last", "fs"))

    def is_successor(self, x: int, y: int) -> bool:
        return self._run("successor", x=x, y=y) != 0

    def is_limit(self, x: int) -> bool:
        return self._run("limit", x=x) != 0

    def first_element(self) -> int:
        return self._run("first")

    def last_element(self) -> int:
        return self._run("last")

    def fundamental(self, x: int, n: int) -> int:
        return self._run("fs", x=x, n=n)

    def predecessor_of(self, x: int, search_bound: int = 0) -> Optional[int]:
        """
        Immediate predecessor of x, or None.

        Without a predecessor component the successor program is searched below
        ``search_bound``.
        """
        if self.predecessor is not None:
            value = self._run("predecessor", x=x)
            return value - 1 if value else None
        if self.successor is None:
            raise OrderError(f"Presentation <{self.name}> has neither predecessor nor successor")
        for y in range(search_bound):
            if self.member(y) and self.is_successor(y, x):
                return y
        return None

    # -- text form

    def to_expr(self) -> Expr:
        parts = [("name", self.name)]
        for component in COMPONENTS:
            program = getattr(self, component)
            if program is not None:
                parts.append((component, program))
        parts.append(("fuel", self.fuel))
        if self.universe_bound is not None:
            parts.append(("universe-bound", self.universe_bound))
        return ("presentation",) + tuple(parts)

    def to_text(self) -> str:
        return program_text(self.to_expr())

    def code(self) -> int:
        """Index of the presentation: the big-endian integer of its canonical text."""
        return int.from_bytes(self.to_text().encode("utf-8"), "big")

    def renamed(self, name: str) -> "OrderPresentation":
        return replace(self, name=name, _cache={}, _lock=threading.Lock())

    @staticmethod
    def from_expr(expr: Expr) -> "OrderPresentation":
        if not isinstance(expr, tuple) or not expr or expr[0] != "presentation":
            raise ProgramSyntaxError("Not a presentation", program_text(expr)[:80])
        fields = {}
        for part in expr[1:]:
            if not isinstance(part, tuple) or len(part) != 2 or not isinstance(part[0], str):
                raise ProgramSyntaxError("Malformed presentation component", program_text(part)[:80])
            key, value = part
            if key == "name":
                fields["name"] = str(value)
            elif key == "fuel":
                fields["fuel"] = int(value)
            elif key == "universe-bound":
                fields["universe_bound"] = int(value)
            elif key in COMPONENTS:
                fields[key] = value
            else:
                raise ProgramSyntaxError(f"Unknown presentation component <{key}>")
        if "name" not in fields or "compare" not in fields:
            raise ProgramSyntaxError("A presentation needs a name and a compare program")
        return OrderPresentation(**fields)

    @staticmethod
    def from_text(text: str) -> "OrderPresentation":
        return presentation_from_text(text)

    @staticmethod
    def from_code(code: int) -> "OrderPresentation":
        raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
        try:
            return presentation_from_text(raw.decode("utf-8"))
        except UnicodeDecodeError:
            raise ProgramSyntaxError(f"Presentation code {code} is not UTF-8") from None


_presentations_lock = threading.RLock()


@lru_cache(maxsize=1024)
def _presentation_for(key: str) -> OrderPresentation:
    return OrderPresentation.from_expr(parse_program(key))


def presentation_from_text(text: str) -> OrderPresentation:
    """Parse a presentation; identical texts share one instance and its comparison cache."""
    with _presentations_lock:
        return _presentation_for(text.strip())


@lru_cache(maxsize=1024)
def presentation_from_expr(expr: Expr) -> OrderPresentation:
    """Presentation embedded as an opcode argument."""
    return presentation_from_text(program_text(expr))


def explore_prefix(p: OrderPresentation, bound: int) -> FiniteOrder:
    """
    Restriction of the presentation to member codes below ``bound``.

    :raises LinearityError: when the comparison is not a linear order on the prefix
    :raises FuelExhaustedError: when a comparison exceeds the fuel policy
    """
    if bound < 0:
        raise OrderError(f"Negative bound {bound}")
    members = [x for x in range(bound) if p.member(x)]
    order = FiniteOrder.from_relation(members, p.leq)
    if p.successor is None:
        return order
    pairs = [(x, y) for x, y in zip(order.elements, order.elements[1:]) if p.is_successor(x, y)]
    for x in order.elements:
        for y in order.elements:
            if p.is_successor(x, y) and (x, y) not in pairs:
                raise LinearityError(f"<{p.name}> declares {x} -> {y} a successor pair", "they are not adjacent in the prefix")
    return FiniteOrder(order.elements, pairs)


def sort_members(p: OrderPresentation, codes) -> Tuple[int, ...]:
    """Member codes sorted by the presentation, without the linearity audit."""
    members = [x for x in codes if p.member(x)]
    return tuple(sorted(members, key=cmp_to_key(lambda a, b: 0 if a == b else (-1 if p.leq(a, b) else 1))))


@host_relation("Le")
def _le(_, code, x, y):
    """Le(p, x, y): x <= y in the presentation with index p."""
    try:
        p = OrderPresentation.from_code(code)
    except (ProgramSyntaxError, OrderError):
        return False
    try:
        return p.leq(x, y)
    except FuelExhaustedError as exc:
        raise HostUnknown(exc.headline) from None
