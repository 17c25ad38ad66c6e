"""Sequents of closed NNF formulas and their classification in a deduction chain."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterator, Optional, Tuple

from src.errors import ChainError
from src.logic.evaluate import Evaluator
from src.logic.formula import And, Exists, Forall, Formula, Or, free_vars, is_literal, to_text, unfold_bounded
from src.logic.goedel import seq_encode


class NodeKind(str, Enum):
    AXIOMATIC = "axiomatic"
    REDUCIBLE = "reducible"
    STUCK = "stuck"


class RuleCase(str, Enum):
    OR = "or"
    AND = "and"
    EXISTS = "exists"
    FORALL = "forall"


@dataclass(frozen=True)
class Sequent:
    """Finite ordered list of closed formulas; equality is order sensitive."""
    formulas: Tuple[Formula, ...] = ()

    def __post_init__(self):
        for f in self.formulas:
            if free_vars(f):
                raise ChainError("Sequents hold sentences only", to_text(f))

    @staticmethod
    def of(*formulas: Formula) -> "Sequent":
        return Sequent(tuple(formulas))

    def __len__(self):
        return len(self.formulas)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __getitem__(self, index: int) -> Formula:
        return self.formulas[index]

    def redex_index(self) -> Optional[int]:
        """Position of the first non-literal; everything to its left is a literal."""
        for index, f in enumerate(self.formulas):
            if not is_literal(f):
                return index
        return None

    def splice(self, index: int, *replacement: Formula, tail: Tuple[Formula, ...] = ()) -> "Sequent":
        return Sequent(self.formulas[:index] + tuple(replacement) + self.formulas[index + 1:] + tuple(tail))

    def to_list(self):
        return [to_text(f) for f in self.formulas]

    def __str__(self):
        return ", ".join(self.to_list()) or "(empty)"


def literal_truth(f: Formula) -> Optional[bool]:
    """Closed literals are decided outright; undecided host primitives give None."""
    return Evaluator(0).literal(f, {})


def reduct(f: Formula) -> Formula:
    """Bounded quantifiers are reduced through their guard form."""
    return unfold_bounded(f)


def case_of(f: Formula) -> RuleCase:
    f = reduct(f)
    if isinstance(f, Or):
        return RuleCase.OR
    if isinstance(f, And):
        return RuleCase.AND
    if isinstance(f, Exists):
        return RuleCase.EXISTS
    if isinstance(f, Forall):
        return RuleCase.FORALL
    raise ChainError("Literals are not redexes", to_text(f))


@dataclass(frozen=True)
class ChainNode:
    """
        One sequent of a deduction chain together with its position in the
        Stammbaum: ``path`` lists the child indices taken from the root and
        ``seen`` every formula met on the way, which the exists case needs.
    """
    sequent: Sequent
    kind: NodeKind
    redex: Optional[int] = None
    case: Optional[RuleCase] = None
    path: Tuple[int, ...] = ()
    seen: FrozenSet[Formula] = field(default_factory=frozenset, repr=False, compare=False)

    @property
    def code(self) -> int:
        return seq_encode(self.path)

    @property
    def redex_formula(self) -> Optional[Formula]:
        return None if self.redex is None else self.sequent[self.redex]

    @property
    def is_leaf(self) -> bool:
        return self.kind is not NodeKind.REDUCIBLE

    def to_dict(self) -> dict:
        return {
            "path": list(self.path),
            "sequent": self.sequent.to_list(),
            "kind": self.kind.value,
            "redex": self.redex,
            "case": self.case.value if self.case else None,
        }


def classify(sequent: Sequent, path: Tuple[int, ...] = (), seen: FrozenSet[Formula] = frozenset()) -> ChainNode:
    seen = seen | frozenset(sequent.formulas)
    if any(is_literal(f) and literal_truth(f) is True for f in sequent):
        return ChainNode(sequent, NodeKind.AXIOMATIC, path=path, seen=seen)
    index = sequent.redex_index()
    if index is None:
        return ChainNode(sequent, NodeKind.STUCK, path=path, seen=seen)
    return ChainNode(sequent, NodeKind.REDUCIBLE, index, case_of(sequent[index]), path, seen)
