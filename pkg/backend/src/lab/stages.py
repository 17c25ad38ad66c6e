"""
Stage sequences: total maps i -> finite order with a partial successor relation.

A sequence is described by an s-expression so that presentations built on top
of it stay serializable::

    (explicit S0 S1 ...)      listed stages, the last one repeats
    (prefix P)                member codes up to i of the presentation P
    (limit A E)               linear parts of the relations approximated by A
    (jump-omega S)            stages of the w-times machine run on S
    (jump-copy S)             stages of the copy machine run on S
    (ash-knight F i)          the one-point-or-densify stages of index i

A listed stage is written ((elements ...) ((x y) ...)). Orders emitted by stage
machines are read with the stage-max rule: x <= y is asked at stage max(x, y)
and the successor relation at stage max(x, y) + 1.
"""
from __future__ import annotations

import importlib
import threading
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.errors import ProgramError, StageMachineError
from src.orders.finite import FiniteOrder
from src.orders.presentation import OrderPresentation, explore_prefix, presentation_from_expr
from src.orders.program import Expr, opcode, program_text, run
from src.utils.trace import TraceWriter

StageFunction = Callable[[int], FiniteOrder]
StageSource = Callable[[Tuple[Expr, ...], TraceWriter], StageFunction]

STAGE_SOURCES: Dict[str, StageSource] = {}
"""
Stage sources by head symbol. A source gets the remaining arguments of the
description and the trace of the sequence, and returns the stage function.
"""

_EXTENSIONS = ("src.lab.approx", "src.lab.jump_omega", "src.lab.jump_copy", "src.lab.ash_knight")
_loaded = False


def stage_source(name: str):
    def decorator(fn: StageSource) -> StageSource:
        STAGE_SOURCES[name] = fn
        return fn

    return decorator


def _resolve(name: str) -> StageSource:
    global _loaded
    if name not in STAGE_SOURCES and not _loaded:
        _loaded = True
        for module in _EXTENSIONS:
            importlib.import_module(module)
    if name not in STAGE_SOURCES:
        raise ProgramError(f"Unknown stage source <{name}>")
    return STAGE_SOURCES[name]


def order_expr(f: FiniteOrder) -> Expr:
    return tuple(f.elements), tuple(sorted(f.successors))


def order_from_expr(expr: Expr) -> FiniteOrder:
    elements, successors = expr
    return FiniteOrder(elements, [tuple(pair) for pair in successors])


def coherence_issue(a: FiniteOrder, b: FiniteOrder) -> Optional[str]:
    """Why two consecutive stages are not locally coherent, or None."""
    if not a.agrees_with(b):
        return "order differs on shared elements"
    shared = {x for x in a if x in b}
    lost = [(x, y) for x, y in a.successors if x in shared and y in shared and (x, y) not in b.successors]
    if lost:
        return f"successor pairs dropped: {sorted(lost)}"
    return None


class StageSequence:
    """
        Memoized stage function together with its description and its audit trace.
    """

    def __init__(self, source: Expr):
        if not isinstance(source, tuple) or not source or not isinstance(source[0], str):
            raise ProgramError(f"Not a stage description: {program_text(source)[:60]}")
        self.source = source
        self.trace = TraceWriter()
        self._stage = _resolve(source[0])(source[1:], self.trace)
        self._stages: Dict[int, FiniteOrder] = {}
        self._lock = threading.RLock()

    def __repr__(self):
        return f"StageSequence({program_text(self.source)[:60]})"

    def __getitem__(self, i: int) -> FiniteOrder:
        if i < 0:
            raise StageMachineError(f"Negative stage {i}")
        if i not in self._stages:
            with self._lock:
                if i not in self._stages:
                    self._stages[i] = self._stage(i)
        return self._stages[i]

    @property
    def machine(self):
        """The stage machine behind the sequence, when its source runs one."""
        return getattr(self._stage, "machine", None)

    def prefix(self, count: int) -> List[FiniteOrder]:
        return [self[i] for i in range(count)]

    @staticmethod
    def explicit(orders: Sequence[FiniteOrder]) -> "StageSequence":
        return stage_sequence(("explicit",) + tuple(order_expr(f) for f in orders))

    @staticmethod
    def from_presentation(p: OrderPresentation) -> "StageSequence":
        return stage_sequence(("prefix", p.to_expr()))

    def coherence_violations(self, count: int) -> List[Tuple[int, str]]:
        """Stage pairs (i, i+1) with i + 1 < count that are not locally coherent."""
        issues = []
        for i in range(count - 1):
            issue = coherence_issue(self[i], self[i + 1])
            if issue is not None:
                issues.append((i, issue))
        return issues

    def locally_coherent(self, count: int) -> bool:
        return not self.coherence_violations(count)


_sequences_lock = threading.RLock()


@lru_cache(maxsize=512)
def _sequence_for(source: Expr) -> StageSequence:
    return StageSequence(source)


def stage_sequence(source: Expr) -> StageSequence:
    """Identical descriptions share one sequence, and so one machine run."""
    with _sequences_lock:
        return _sequence_for(source)


@stage_source("explicit")
def _explicit(args, trace):
    orders = [order_from_expr(expr) for expr in args]

    def stage(i: int) -> FiniteOrder:
        return orders[min(i, len(orders) - 1)] if orders else FiniteOrder()

    return stage


@stage_source("prefix")
def _prefix(args, trace):
    p = presentation_from_expr(args[0])

    def stage(i: int) -> FiniteOrder:
        return explore_prefix(p, i + 1)

    return stage


# ---------------------------------------------------------------- stage-max rule


def stage_max_presentation(stages: StageSequence, name: str, successor: bool = True) -> OrderPresentation:
    """Computable order whose elements enter no later than the stage named by their own code."""
    return OrderPresentation(
        name=name,
        compare=("stage-max-le", stages.source, "x", "y"),
        successor=("stage-max-succ", stages.source, "x", "y") if successor else None,
        first=0,
    )


@opcode("stage-max-le")
def _stage_max_le(args, env, fuel):
    source, x, y = args
    x, y = run(x, env, fuel), run(y, env, fuel)
    stage = stage_sequence(source)[max(x, y)]
    return int(x in stage and y in stage and stage.leq(x, y))


@opcode("stage-max-succ")
def _stage_max_succ(args, env, fuel):
    source, x, y = args
    x, y = run(x, env, fuel), run(y, env, fuel)
    return int(stage_sequence(source)[max(x, y) + 1].is_successor(x, y))


def stage_max_instabilities(stages: StageSequence, bound: int, horizon: Optional[int] = None) -> List[Tuple[int, int, int]]:
    """
    Triples (x, y, t): the answer to x <= y at stage max(x, y) differs from the answer at the later stage t.

    Stages up to ``horizon`` are checked, twice the bound by default.
    """
    horizon = 2 * bound if horizon is None else horizon
    issues = []
    for x in range(bound):
        for y in range(bound):
            m = max(x, y)
            stage = stages[m]
            settled = x in stage and y in stage and stage.leq(x, y)
            for t in range(m + 1, horizon + 1):
                later = stages[t]
                if settled != (x in later and y in later and later.leq(x, y)):
                    issues.append((x, y, t))
                    break
    return issues
