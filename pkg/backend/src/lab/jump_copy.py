"""
The copy machine: a computable copy of the limit of a locally coherent sequence
whose successor pairs settle, for limits of type w·K.

Every element of L'_s carries a label in A_s. Moving to stage s + 1 a label
drops to the largest element of A_{s+1} and A_s at or below it (in A_s), and
every element of A_{s+1} left without a preimage gets a fresh element placed
by its label. The elements ever labeled a, from the stage at which a settles
on, form the block B_a; the copy is the sum of the blocks.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Set

from src.lab.jump_omega import FreshCounter, MachineState, check_stage, label_issues
from src.lab.stages import StageSequence, stage_max_presentation, stage_sequence, stage_source
from src.orders.finite import FiniteOrder
from src.orders.presentation import OrderPresentation
from src.utils.trace import TraceWriter


@dataclass
class Block:
    label: int
    anchor: int
    members: List[int]
    last_growth: int

    def to_dict(self) -> dict:
        return {"label": self.label, "anchor": self.anchor, "members": self.members, "last_growth": self.last_growth}


class JumpCopyMachine:
    def __init__(self, stages: StageSequence, trace: Optional[TraceWriter] = None):
        self.stages = stages
        self.trace = trace if trace is not None else TraceWriter()
        self.states: List[MachineState] = []
        self._lock = threading.RLock()

    def state(self, s: int) -> MachineState:
        with self._lock:
            if not self.states:
                a0 = self.stages[0]
                check_stage(0, a0, bounded=False)
                self.states.append(MachineState(0, FiniteOrder(a0.elements), {x: x for x in a0}, max(a0.elements) + 1))
            while len(self.states) <= s:
                self.states.append(self._step(self.states[-1]))
            return self.states[s]

    def _step(self, state: MachineState) -> MachineState:
        s = state.stage
        a, b = self.stages[s], self.stages[s + 1]
        check_stage(s + 1, b, bounded=False)
        fresh = FreshCounter(state.fresh)
        elements = list(state.order.elements)
        labels = dict(state.labels)
        shared = [c for c in a if c in b]

        for x in elements:
            old = labels[x]
            new = max((c for c in shared if a.leq(c, old)), key=a.position.get)
            if new != old:
                labels[x] = new
                self.trace.emit(s + 1, "relabel", element=x, old=old, new=new)

        used: Set[int] = set(labels.values())
        for c in b:
            if c in used:
                continue
            x = fresh.take(s)
            position = next((k for k, y in enumerate(elements) if b.less(c, labels[y])), len(elements))
            elements.insert(position, x)
            labels[x] = c
            self.trace.emit(s + 1, "add", element=x, label=c)

        return MachineState(s + 1, FiniteOrder(elements), labels, fresh.next)

    def audit(self, count: int):
        return [(s, issue) for s in range(count) for issue in label_issues(self.state(s), self.stages[s])]

    def blocks(self, horizon: int) -> Dict[int, Block]:
        """
        Blocks B_a of a run through stage ``horizon`` for every a in A_horizon.

        The anchor of a is the first stage from which a stays in every stage up to
        the horizon; members are the elements labeled a at or after the anchor.
        """
        final = self.stages[horizon]
        found = {}
        for label in final:
            anchor = horizon
            while anchor > 0 and label in self.stages[anchor - 1]:
                anchor -= 1
            members, last_growth = [], anchor
            for s in range(anchor, horizon + 1):
                for x, c in self.state(s).labels.items():
                    if c == label and x not in members:
                        members.append(x)
                        last_growth = s
            found[label] = Block(label, anchor, sorted(members, key=self.state(horizon).order.position.get), last_growth)
        return found


def copy_machine(stages: StageSequence) -> JumpCopyMachine:
    return stage_sequence(("jump-copy", stages.source)).machine


@stage_source("jump-copy")
def _jump_copy(args, trace):
    machine = JumpCopyMachine(stage_sequence(args[0]), trace)

    def stage(s: int) -> FiniteOrder:
        return machine.state(s).order

    stage.machine = machine
    return stage


def jump_inv_copy(stages: StageSequence, name: str = "copy") -> OrderPresentation:
    """
    Computable copy of the limit with 0 first, read off the machine with the stage-max rule.

    :raises PreconditionViolation: at the first stage whose least element is not 0
    """
    return stage_max_presentation(stage_sequence(("jump-copy", stages.source)), name, successor=False)
