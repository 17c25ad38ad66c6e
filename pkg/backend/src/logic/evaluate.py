"""Fuel-bounded three-valued evaluation over the standard model."""
from __future__ import annotations

import importlib
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Mapping, Optional

from src.errors import FormulaError, GoedelDecodeError
from src.logic.formula import (
    Add,
    And,
    Apply,
    Eq,
    Exists,
    Formula,
    Lt,
    Mul,
    Num,
    Or,
    Rel,
    Succ,
    Term,
    Var,
    free_vars,
    functions,
    substitute,
)
from src.logic.goedel import goedel_decode, goedel_encode, name_decode, pair, seq_at, seq_len, unpair


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @staticmethod
    def of(value: Optional[bool]) -> "Verdict":
        if value is None:
            return Verdict.UNKNOWN
        return Verdict.TRUE if value else Verdict.FALSE


@dataclass(frozen=True)
class TruthVerdict:
    value: Verdict
    fuel: int

    @property
    def is_true(self) -> bool:
        return self.value is Verdict.TRUE

    @property
    def is_false(self) -> bool:
        return self.value is Verdict.FALSE

    @property
    def is_unknown(self) -> bool:
        return self.value is Verdict.UNKNOWN

    def as_bool(self) -> Optional[bool]:
        return None if self.is_unknown else self.is_true


class UndefinedValue(Exception):
    """A partial function was applied outside its domain."""


class HostUnknown(Exception):
    """A host primitive could not settle its value within its budget."""


HostFunction = Callable[..., int]
HostRelation = Callable[..., Optional[bool]]

HOST_FUNCTIONS: Dict[str, HostFunction] = {}
"""
Host primitive functions by name. Each receives the running Evaluator followed by its integer arguments.
"""

HOST_RELATIONS: Dict[str, HostRelation] = {}
"""
Host primitive relations by name. They return True, False or None when undecided.
"""

_EXTENSIONS = (
    "src.logic.proofs",
    "src.orders.presentation",
    "src.progressions.notations",
    "src.progressions.reflection",
)
_loaded = False


def host_function(name: str):
    def decorator(fn: HostFunction) -> HostFunction:
        HOST_FUNCTIONS[name] = fn
        return fn

    return decorator


def host_relation(name: str):
    def decorator(fn: HostRelation) -> HostRelation:
        HOST_RELATIONS[name] = fn
        return fn

    return decorator


def _load_extensions():
    global _loaded
    if not _loaded:
        _loaded = True
        for module in _EXTENSIONS:
            importlib.import_module(module)


def resolve_function(name: str) -> Optional[HostFunction]:
    if name not in HOST_FUNCTIONS:
        _load_extensions()
    return HOST_FUNCTIONS.get(name)


def resolve_relation(name: str) -> HostRelation:
    if name not in HOST_RELATIONS:
        _load_extensions()
    if name not in HOST_RELATIONS:
        raise FormulaError(f"Unknown relation <{name}>")
    return HOST_RELATIONS[name]


class Evaluator:
    """
    Kleene strong three-valued evaluator.

    In window mode unbounded quantifiers are read as bounded by ``fuel``, which
    makes the verdict two-valued up to undecided host primitives.
    """

    def __init__(self, fuel: int, window: bool = False, interpretation: Mapping[str, Callable[[int], int]] = None,
                 program_fuel: int = 200_000):
        self.fuel = fuel
        self.window = window
        self.interpretation = dict(interpretation or {})
        self.program_fuel = program_fuel

    def term(self, t: Term, env: Mapping[str, int]) -> int:
        if isinstance(t, Num):
            return t.value
        if isinstance(t, Var):
            if t.name not in env:
                raise FormulaError(f"Free variable <{t.name}> during evaluation")
            return env[t.name]
        if isinstance(t, Succ):
            return self.term(t.arg, env) + 1
        if isinstance(t, Add):
            return self.term(t.left, env) + self.term(t.right, env)
        if isinstance(t, Mul):
            return self.term(t.left, env) * self.term(t.right, env)
        if isinstance(t, Apply):
            args = [self.term(a, env) for a in t.args]
            if t.fn in self.interpretation:
                return self.interpretation[t.fn](*args)
            fn = resolve_function(t.fn)
            if fn is None:
                raise FormulaError(f"Uninterpreted function <{t.fn}>")
            return fn(self, *args)
        raise FormulaError(f"Not a term: {t!r}")

    def literal(self, f, env) -> Optional[bool]:
        try:
            if isinstance(f, Rel):
                args = [self.term(a, env) for a in f.args]
                value = resolve_relation(f.name)(self, *args)
            elif isinstance(f, Eq):
                value = self.term(f.left, env) == self.term(f.right, env)
            else:
                value = self.term(f.left, env) < self.term(f.right, env)
        except (UndefinedValue, HostUnknown):
            return None
        if value is None:
            return None
        return (not value) if f.negated else bool(value)

    def formula(self, f: Formula, env: Mapping[str, int]) -> Optional[bool]:
        if isinstance(f, (Eq, Lt, Rel)):
            return self.literal(f, env)
        if isinstance(f, And):
            left = self.formula(f.left, env)
            if left is False:
                return False
            right = self.formula(f.right, env)
            if right is False:
                return False
            return True if left and right else None
        if isinstance(f, Or):
            left = self.formula(f.left, env)
            if left is True:
                return True
            right = self.formula(f.right, env)
            if right is True:
                return True
            return False if left is False and right is False else None

        if f.bound is not None:
            try:
                limit = self.term(f.bound, env)
            except (UndefinedValue, HostUnknown):
                return None
            return self._search(f, env, limit, exhaustive=True)
        return self._search(f, env, self.fuel, exhaustive=self.window)

    def _search(self, f, env, limit: int, exhaustive: bool) -> Optional[bool]:
        """Bounded scan for a witness (exists) or a counterexample (forall)."""
        decisive = isinstance(f, Exists)
        undecided = False
        scope = dict(env)
        for m in range(limit):
            scope[f.var] = m
            value = self.formula(f.body, scope)
            if value is decisive:
                return decisive
            if value is None:
                undecided = True
        if exhaustive and not undecided:
            return not decisive
        return None


def _check_sentence(f: Formula, allowed: frozenset = frozenset()):
    free = free_vars(f) - allowed
    if free:
        raise FormulaError("Evaluation needs a sentence", "free variables: " + ", ".join(sorted(free)))


def evaluate(f: Formula, fuel: int, program_fuel: int = 200_000) -> TruthVerdict:
    """
    Decide literals and bounded quantifiers exactly, search unbounded ones below ``fuel``.

    A true or false verdict is never wrong for the standard model, and it stays
    the same at every larger fuel.
    """
    _check_sentence(f)
    for name in functions(f):
        if resolve_function(name) is None:
            raise FormulaError(f"Uninterpreted function <{name}>", "evaluate only accepts host primitives")
    return TruthVerdict(Verdict.of(Evaluator(fuel, program_fuel=program_fuel).formula(f, {})), fuel)


def evaluate_window(f: Formula, fuel: int, program_fuel: int = 200_000) -> TruthVerdict:
    """Two-valued evaluation: every unbounded quantifier ranges over numbers below ``fuel``."""
    _check_sentence(f)
    return TruthVerdict(Verdict.of(Evaluator(fuel, window=True, program_fuel=program_fuel).formula(f, {})), fuel)


def evaluate_open(f: Formula, env: Mapping[str, int], fuel: int, interpretation=None, window: bool = False):
    """Evaluate with an assignment and an interpretation of extra function symbols; None means undecided."""
    _check_sentence(f, frozenset(env))
    return Evaluator(fuel, window=window, interpretation=interpretation).formula(f, env)


# ---------------------------------------------------------------- arithmetic primitives


@host_function("pair")
def _pair(_, i, j):
    return pair(i, j)


@host_function("left")
def _left(_, z):
    return unpair(z)[0]


@host_function("right")
def _right(_, z):
    return unpair(z)[1]


@host_function("len")
def _len(_, s):
    return seq_len(s)


@host_function("at")
def _at(_, s, i):
    return seq_at(s, i)


@lru_cache(maxsize=1024)
def substitute_code(code: int, var_code: int, value: int) -> int:
    """Code of the formula ``code`` with the numeral ``value`` for the variable named ``var_code``."""
    try:
        formula = goedel_decode(code)
        name = name_decode(var_code)
    except (GoedelDecodeError, RecursionError):
        return code
    return goedel_encode(substitute(formula, {name: Num(value)}))


@host_function("sub")
def _sub(_, code, var_code, value):
    return substitute_code(code, var_code, value)
