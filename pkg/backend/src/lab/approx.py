"""
Limit approximations: computable sequences of finite sets and their limits.

Finite sets travel as Ackermann codes (bit x of the code is set iff x is in the
set), so an approximation is any program of ``i`` returning a code.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import StageMachineError
from src.lab.stages import StageSequence, stage_sequence, stage_source
from src.logic.goedel import unpair
from src.orders.finite import FiniteOrder
from src.orders.program import Expr, Fuel, evaluate_program, opcode, program_text, run
from src.utils.console import log

EXACT_LIMIT = 16


def ackermann_encode(values: Iterable[int]) -> int:
    code = 0
    for x in set(values):
        code |= 1 << x
    return code


def ackermann_decode(code: int) -> FrozenSet[int]:
    members, x = set(), 0
    while code:
        if code & 1:
            members.add(x)
        code >>= 1
        x += 1
    return frozenset(members)


class ApproxSequence:
    """
        Total program i -> Ackermann code of a finite set A_i.

        ``declared_limit`` is what the caller claims the limit to be; it is only
        read by ``limit_of`` reports.
    """

    def __init__(self, program: Expr, declared_limit: Optional[Iterable[int]] = None, budget: int = 200_000):
        self.program = program
        self.declared_limit = None if declared_limit is None else frozenset(declared_limit)
        self.budget = budget
        self._codes: Dict[int, int] = {}

    def __repr__(self):
        return f"ApproxSequence({program_text(self.program)[:60]})"

    def code(self, i: int) -> int:
        if i not in self._codes:
            self._codes[i] = evaluate_program(self.program, {"i": i}, self.budget)
        return self._codes[i]

    def __getitem__(self, i: int) -> FrozenSet[int]:
        return ackermann_decode(self.code(i))

    @staticmethod
    def explicit(sets: Sequence[Iterable[int]], declared_limit: Optional[Iterable[int]] = None) -> "ApproxSequence":
        """Listed sets; the last one repeats."""
        codes = tuple(ackermann_encode(s) for s in sets)
        return ApproxSequence(("stage-list", "i", codes), declared_limit)

    @staticmethod
    def constant(values: Iterable[int]) -> "ApproxSequence":
        values = frozenset(values)
        return ApproxSequence(ackermann_encode(values), values)


@opcode("stage-list")
def _stage_list(args, env, fuel):
    """``(stage-list I (C0 C1 ...))``: C_I, or the last listed code past the end."""
    index, codes = args
    codes = codes if isinstance(codes, tuple) else (codes,)
    if not codes:
        return 0
    return codes[min(run(index, env, fuel), len(codes) - 1)]


@dataclass
class LimitReport:
    """Membership history of every y below ``bound`` over ``stages`` stages."""
    bound: int
    stages: int
    limit: FrozenSet[int]
    settled_at: Dict[int, int] = field(default_factory=dict)
    changes: Dict[int, int] = field(default_factory=dict)
    declared: Optional[FrozenSet[int]] = None

    @property
    def stabilized_at(self) -> int:
        """First stage from which every y below the bound keeps its membership."""
        return max(self.settled_at.values(), default=0)

    def oscillating(self, threshold: int = 2) -> List[int]:
        return sorted(y for y, count in self.changes.items() if count >= threshold)

    def agrees_with(self, target: Iterable[int]) -> bool:
        return self.limit == frozenset(y for y in target if y < self.bound)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "stages": self.stages,
            "limit": sorted(self.limit),
            "settled_at": {str(y): s for y, s in sorted(self.settled_at.items())},
            "changes": {str(y): c for y, c in sorted(self.changes.items())},
            "declared_agrees": None if self.declared is None else self.agrees_with(self.declared),
        }


def limit_of(approx: ApproxSequence, bound: int, stages: int) -> LimitReport:
    """Read the apparent limit below ``bound`` off stages 0 .. stages - 1."""
    if stages < 1:
        raise StageMachineError("A limit report needs at least one stage")
    history = [approx[i] for i in range(stages)]
    settled, changes, limit = {}, {}, set()
    for y in range(bound):
        values = [y in a for a in history]
        flips = [i for i in range(1, stages) if values[i] != values[i - 1]]
        settled[y] = flips[-1] if flips else 0
        changes[y] = len(flips)
        if values[-1]:
            limit.add(y)
    return LimitReport(bound, stages, frozenset(limit), settled, changes, approx.declared_limit)


# ---------------------------------------------------------------- limit lemma


class LimitDecomposition:
    """
        Approximation of a set Y from two matrices, one certifying y in Y and one
        certifying y not in Y, each of the form "for all u there is v with R".

        The matrix programs read ``y``, ``u``, ``v`` and the oracle code ``X``;
        the oracle is a program of ``i`` giving the code of X at stage i.
    """

    def __init__(self, member: Expr, nonmember: Expr, oracle: Expr = 0, budget: int = 200_000):
        self.member = member
        self.nonmember = nonmember
        self.oracle = oracle
        self.budget = budget
        self._b: Dict[int, FrozenSet[int]] = {}
        self._c: Dict[int, FrozenSet[int]] = {}
        self._lock = threading.Lock()

    @property
    def program(self) -> Expr:
        return "limit-decompose", self.member, self.nonmember, self.oracle, "i"

    def oracle_code(self, i: int) -> int:
        return evaluate_program(self.oracle, {"i": i}, self.budget)

    def _bounded_set(self, matrix: Expr, i: int) -> FrozenSet[int]:
        """{y < i : some u < i has R(y, u, v) for all v < i}."""
        env = {"X": self.oracle_code(i)}
        found = set()
        for y in range(i):
            env["y"] = y
            for u in range(i):
                env["u"] = u
                if all(run(matrix, {**env, "v": v}, Fuel(self.budget)) for v in range(i)):
                    found.add(y)
                    break
        return frozenset(found)

    def B(self, i: int) -> FrozenSet[int]:
        if i not in self._b:
            with self._lock:
                self._b[i] = self._bounded_set(self.member, i)
        return self._b[i]

    def C(self, i: int) -> FrozenSet[int]:
        if i not in self._c:
            with self._lock:
                self._c[i] = self._bounded_set(self.nonmember, i)
        return self._c[i]

    @staticmethod
    def _age(family, i: int, y: int) -> int:
        for k in range(i + 1):
            if y not in family(i - k):
                return k
        return i + 1

    def age_b(self, i: int, y: int) -> int:
        return self._age(self.B, i, y)

    def age_c(self, i: int, y: int) -> int:
        return self._age(self.C, i, y)

    def A(self, i: int) -> FrozenSet[int]:
        return frozenset(y for y in range(i) if self.age_b(i, y) > self.age_c(i, y))

    def approx(self, declared_limit: Optional[Iterable[int]] = None) -> ApproxSequence:
        return ApproxSequence(self.program, declared_limit)


_decompositions_lock = threading.RLock()


@lru_cache(maxsize=256)
def _decomposition_for(member: Expr, nonmember: Expr, oracle: Expr) -> LimitDecomposition:
    return LimitDecomposition(member, nonmember, oracle)


def decomposition_for(member: Expr, nonmember: Expr, oracle: Expr = 0) -> LimitDecomposition:
    """One decomposition, and so one memo of B and C, per triple of programs."""
    with _decompositions_lock:
        return _decomposition_for(member, nonmember, oracle)


@opcode("limit-decompose")
def _limit_decompose(args, env, fuel):
    """``(limit-decompose R0 R1 X I)``: code of A_I for the matrices R0 and R1 over the oracle X."""
    member, nonmember, oracle, index = args
    return ackermann_encode(decomposition_for(member, nonmember, oracle).A(run(index, env, fuel)))


def limit_decompose(member: Expr, nonmember: Expr,
                    oracle: Union[ApproxSequence, Iterable[int], Expr, None] = None,
                    declared_limit: Optional[Iterable[int]] = None) -> ApproxSequence:
    """
    Approximation whose limit is the set certified by the two matrices.

    :param member: program of y, u, v, X; y is in the set iff for all u some v satisfies it
    :param nonmember: the same for the complement
    :param oracle: an approximation, an explicit finite set, or a program of i; the empty set by default
    """
    if oracle is None:
        oracle = 0
    elif isinstance(oracle, ApproxSequence):
        oracle = oracle.program
    elif not isinstance(oracle, (int, str, tuple)):
        oracle = ackermann_encode(oracle)
    return decomposition_for(member, nonmember, oracle).approx(declared_limit)


# ---------------------------------------------------------------- relations to stages


def relation_pairs(code: int) -> FrozenSet[Tuple[int, int]]:
    return frozenset(unpair(z) for z in ackermann_decode(code))


def _is_linear(matrix: np.ndarray) -> bool:
    size = matrix.shape[0]
    if not size:
        return True
    both = matrix & matrix.T
    np.fill_diagonal(both, False)
    composed = (matrix.astype(np.int64) @ matrix.astype(np.int64)) > 0
    return bool(matrix.diagonal().all() and not both.any() and (matrix | matrix.T).all() and not (composed & ~matrix).any())


def largest_linear_subset(field_: Sequence[int], pairs: FrozenSet[Tuple[int, int]],
                          exact_limit: int = EXACT_LIMIT) -> Tuple[Tuple[int, ...], bool]:
    """
    Largest subset of ``field_`` linearly ordered by ``pairs``.

    Ties go to the lexicographically least set. Fields above ``exact_limit`` are
    handled by greedy chain extraction in increasing numeric order; the flag
    tells which way the answer was found.
    """
    elements = sorted(field_)
    index = {x: k for k, x in enumerate(elements)}
    relation = np.zeros((len(elements), len(elements)), dtype=bool)
    for x, y in pairs:
        if x in index and y in index:
            relation[index[x], index[y]] = True
    if len(elements) <= exact_limit:
        for size in range(len(elements), 0, -1):
            for subset in combinations(range(len(elements)), size):
                if _is_linear(relation[np.ix_(subset, subset)]):
                    return tuple(elements[k] for k in subset), True
        return (), True
    chosen: List[int] = []
    for k in range(len(elements)):
        candidate = chosen + [k]
        if _is_linear(relation[np.ix_(candidate, candidate)]):
            chosen = candidate
    return tuple(elements[k] for k in chosen), False


def linear_part(code: int, exact_limit: int = EXACT_LIMIT) -> Tuple[FiniteOrder, bool]:
    pairs = relation_pairs(code)
    field_ = [x for x, y in pairs if x == y]
    subset, exact = largest_linear_subset(field_, pairs, exact_limit)
    return FiniteOrder.from_relation(subset, lambda x, y: (x, y) in pairs), exact


@stage_source("limit")
def _limit(args, trace):
    program, exact_limit = args
    approx = ApproxSequence(program)

    def stage(i: int) -> FiniteOrder:
        if i == 0:
            return FiniteOrder()
        order, exact = linear_part(approx.code(i), exact_limit)
        if not exact:
            trace.emit(i, "greedy", size=len(order))
            log("debug", "Lab", f"Stage {i}: greedy extraction kept {len(order)} elements")
        return order

    return stage


def limit_to_stages(approx: ApproxSequence, exact_limit: int = EXACT_LIMIT) -> StageSequence:
    """
    Finite orders from an approximation of a binary relation, given as pair codes.

    Stage 0 is empty. Stage i keeps the largest part of the field
    {x : <x, x> in the relation at stage i} that the relation orders linearly.
    """
    return stage_sequence(("limit", approx.program, exact_limit))
