"""
The w-times stage machine.

From a locally coherent sequence of finite orders A_s with limit L it builds
finite orders L'_0 <= L'_1 <= ... with partial successor relations S_s and
labelings f_s: L'_s -> A_s. The union has order type w·L: every label carries
a block that keeps growing to the right.

One step from s to s + 1:

    retract   the least a0 in A_s whose lower part is not kept in A_{s+1};
              A' is A_{s+1} on the numbers below a0
    relabel   labels b >= a0 move to the largest element of A' below b,
              neighbors that now share a label become a successor pair
    add       one fresh element for every element of A_{s+1} without one
    grow      one fresh successor after the rightmost element of every block

Fresh elements at this step are numbers above s + 1 never used before, so
every element x already sits in L'_x.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from src.errors import PreconditionViolation
from src.lab.stages import StageSequence, stage_max_presentation, stage_sequence, stage_source
from src.orders.finite import FiniteOrder
from src.orders.presentation import OrderPresentation
from src.utils.trace import TraceWriter


@dataclass
class MachineState:
    """L'_s with its successor pairs, the labeling f_s and the next fresh number."""
    stage: int
    order: FiniteOrder
    labels: Dict[int, int] = field(default_factory=dict)
    fresh: int = 0

    def blocks(self) -> Dict[int, List[int]]:
        found: Dict[int, List[int]] = {}
        for x in self.order:
            found.setdefault(self.labels[x], []).append(x)
        return found

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "order": self.order.to_dict(),
            "labels": {str(x): a for x, a in sorted(self.labels.items())},
            "fresh": self.fresh,
        }


def check_stage(stage: int, a: FiniteOrder, bounded: bool = True):
    """
    :raises PreconditionViolation: when 0 is not the least element, or an element exceeds the stage number
    """
    if a.first != 0:
        raise PreconditionViolation(stage, f"least element is {a.first}, not 0")
    if bounded and max(a.elements) > stage:
        raise PreconditionViolation(stage, f"element {max(a.elements)} exceeds the stage number")


def label_issues(state: MachineState, a: FiniteOrder) -> List[str]:
    """Ways in which f_s fails to be an order-preserving surjection onto A_s."""
    issues = []
    labels = [state.labels[x] for x in state.order]
    missing = set(a.elements) - set(labels)
    if missing:
        issues.append(f"labels {sorted(missing)} have no preimage")
    stray = set(labels) - set(a.elements)
    if stray:
        issues.append(f"labels {sorted(stray)} are not in the stage")
        return issues
    for left, right in zip(labels, labels[1:]):
        if a.less(right, left):
            issues.append(f"labels {left} and {right} are out of order")
    return issues


class FreshCounter:
    def __init__(self, start: int):
        self.next = start

    def take(self, stage: int) -> int:
        """A number above ``stage`` + 1 that was never handed out."""
        self.next = max(self.next, stage + 2)
        value = self.next
        self.next += 1
        return value


class JumpOmegaMachine:
    """
        Runs the w-times construction on ``stages`` one stage at a time.

        States are memoized; the audit trace records every addition, retraction,
        label move, successor seal and block growth.
    """

    def __init__(self, stages: StageSequence, trace: Optional[TraceWriter] = None):
        self.stages = stages
        self.trace = trace if trace is not None else TraceWriter()
        self.states: List[MachineState] = []
        self._lock = threading.RLock()

    def state(self, s: int) -> MachineState:
        with self._lock:
            if not self.states:
                self.states.append(self._start())
            while len(self.states) <= s:
                self.states.append(self._step(self.states[-1]))
            return self.states[s]

    def _start(self) -> MachineState:
        a0 = self.stages[0]
        check_stage(0, a0)
        return MachineState(0, FiniteOrder(a0.elements), {x: x for x in a0}, fresh=2)

    def _step(self, state: MachineState) -> MachineState:
        s = state.stage
        a, b = self.stages[s], self.stages[s + 1]
        check_stage(s + 1, b)
        fresh = FreshCounter(state.fresh)
        elements = list(state.order.elements)
        successors: Set[Tuple[int, int]] = set(state.order.successors)
        labels = dict(state.labels)

        a0 = self._retraction_point(a, b)
        if a0 is not None:
            kept = [x for x in b if x < a0]
            self.trace.emit(s + 1, "retract", element=a0)
            for x in elements:
                old = labels[x]
                if old >= a0:
                    labels[x] = max((c for c in kept if c in a and a.less(c, old)), key=a.position.get)
                    self.trace.emit(s + 1, "relabel", element=x, old=old, new=labels[x])
            for x, y in zip(elements, elements[1:]):
                if labels[x] == labels[y] and (x, y) not in successors:
                    successors.add((x, y))
                    self.trace.emit(s + 1, "seal", pair=[x, y])

        used = set(labels.values())
        for c in b:
            if c in used:
                continue
            x = fresh.take(s)
            position = next((k for k, y in enumerate(elements) if b.less(c, labels[y])), len(elements))
            elements.insert(position, x)
            labels[x] = c
            self.trace.emit(s + 1, "add", element=x, label=c)

        grown = []
        for k, x in enumerate(elements):
            if k + 1 == len(elements) or labels[elements[k + 1]] != labels[x]:
                grown.append(x)
        for x in grown:
            y = fresh.take(s)
            elements.insert(elements.index(x) + 1, y)
            labels[y] = labels[x]
            successors.add((x, y))
            self.trace.emit(s + 1, "grow", element=y, after=x, label=labels[x])

        return MachineState(s + 1, FiniteOrder(elements, successors), labels, fresh.next)

    @staticmethod
    def _retraction_point(a: FiniteOrder, b: FiniteOrder) -> Optional[int]:
        """Least a0 in A such that A on the numbers up to a0 is not a suborder of B."""
        for a0 in sorted(a.elements):
            lower = [x for x in a if x <= a0]
            if any(x not in b for x in lower) or [x for x in b if x in set(lower)] != lower:
                return a0
        return None

    def audit(self, count: int) -> List[Tuple[int, str]]:
        """
        Stage-indexed violations over the first ``count`` stages: f_s must be an
        order-preserving surjection and labels may only move left.
        """
        issues = []
        for s in range(count):
            state = self.state(s)
            issues.extend((s, issue) for issue in label_issues(state, self.stages[s]))
            if s:
                previous = self.state(s - 1)
                a = self.stages[s - 1]
                for x, old in previous.labels.items():
                    new = state.labels[x]
                    if new != old and not (new in a and a.less(new, old)):
                        issues.append((s, f"label of {x} moved from {old} to {new}"))
        return issues


def omega_machine(stages: StageSequence) -> JumpOmegaMachine:
    """The machine run on ``stages``; its trace is the trace of the output sequence."""
    return stage_sequence(("jump-omega", stages.source)).machine


@stage_source("jump-omega")
def _jump_omega(args, trace):
    machine = JumpOmegaMachine(stage_sequence(args[0]), trace)

    def stage(s: int) -> FiniteOrder:
        return machine.state(s).order

    stage.machine = machine
    return stage


def jump_inv_omega_times(stages: StageSequence, name: str = "omega-times") -> OrderPresentation:
    """
    Computable w·L with successors, read off the machine with the stage-max rule.

    :raises PreconditionViolation: at the first stage where 0 is not least or an element exceeds the stage number
    """
    output = stage_sequence(("jump-omega", stages.source))
    return stage_max_presentation(output, name)
