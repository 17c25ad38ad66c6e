"""Finite linear orders with an optional partial successor relation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import LinearityError


class FiniteOrder:
    """
        Triple (A, <=, S) with A listed in increasing order.

        The successor pairs must be adjacent in the order; both the order and the
        successor set are checked when the object is built.
    """

    def __init__(self, elements: Sequence[int] = (), successors: Iterable[Tuple[int, int]] = ()):
        self.elements: Tuple[int, ...] = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise LinearityError("Repeated element in a finite order", str(self.elements))
        self.position: Dict[int, int] = {x: i for i, x in enumerate(self.elements)}
        self.successors: FrozenSet[Tuple[int, int]] = frozenset(successors)
        for x, y in self.successors:
            if x not in self.position or y not in self.position:
                raise LinearityError(f"Successor pair ({x}, {y}) outside the universe")
            if self.position[y] != self.position[x] + 1:
                raise LinearityError(f"Successor pair ({x}, {y}) is not adjacent", f"order: {self.elements}")

    # -- construction

    @staticmethod
    def from_matrix(elements: Sequence[int], matrix: np.ndarray, successors: Iterable[Tuple[int, int]] = ()) -> "FiniteOrder":
        """
        Build from a boolean matrix ``matrix[i, j] = elements[i] <= elements[j]``.

        :raises LinearityError: when the relation is not a linear order
        """
        relation = np.asarray(matrix, dtype=bool)
        size = len(elements)
        if relation.shape != (size, size):
            raise LinearityError(f"Relation matrix of shape {relation.shape} for {size} elements")
        if size:
            if not relation.diagonal().all():
                bad = elements[int(np.argmin(relation.diagonal()))]
                raise LinearityError("Reflexivity fails", f"element {bad}")
            both = relation & relation.T
            np.fill_diagonal(both, False)
            if both.any():
                i, j = map(int, np.argwhere(both)[0])
                raise LinearityError("Antisymmetry fails", f"{elements[i]} and {elements[j]}")
            if not (relation | relation.T).all():
                i, j = map(int, np.argwhere(~(relation | relation.T))[0])
                raise LinearityError("Totality fails", f"{elements[i]} and {elements[j]} are incomparable")
            composed = (relation.astype(np.int64) @ relation.astype(np.int64)) > 0
            if (composed & ~relation).any():
                i, j = map(int, np.argwhere(composed & ~relation)[0])
                raise LinearityError("Transitivity fails", f"{elements[i]} <= ... <= {elements[j]}")
        # in a linear order the rank of x is the number of strict predecessors
        ranks = relation.sum(axis=0) - 1 if size else np.zeros(0, dtype=int)
        ordered = [elements[i] for i in np.argsort(ranks, kind="stable")]
        return FiniteOrder(ordered, successors)

    @staticmethod
    def from_relation(elements: Iterable[int], leq: Callable[[int, int], bool], successors=()) -> "FiniteOrder":
        elements = list(elements)
        matrix = np.array([[bool(leq(x, y)) for y in elements] for x in elements], dtype=bool).reshape(len(elements), len(elements))
        return FiniteOrder.from_matrix(elements, matrix, successors)

    @staticmethod
    def from_pairs(pairs: Iterable[Tuple[int, int]], successors=()) -> "FiniteOrder":
        """Inverse of ``export``; the pairs must list the whole relation."""
        pairs = set(pairs)
        elements = sorted({x for x, _ in pairs} | {y for _, y in pairs})
        return FiniteOrder.from_relation(elements, lambda x, y: (x, y) in pairs, successors)

    @staticmethod
    def chain(size: int) -> "FiniteOrder":
        """0 < 1 < ... < size - 1 with the full successor relation."""
        return FiniteOrder(range(size), [(i, i + 1) for i in range(size - 1)])

    # -- queries

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.position

    def __eq__(self, other):
        return isinstance(other, FiniteOrder) and self.elements == other.elements and self.successors == other.successors

    def __hash__(self):
        return hash((self.elements, self.successors))

    def __repr__(self):
        return "FiniteOrder(" + " < ".join(map(str, self.elements)) + ")"

    def leq(self, x: int, y: int) -> bool:
        return self.position[x] <= self.position[y]

    def less(self, x: int, y: int) -> bool:
        return self.position[x] < self.position[y]

    def is_successor(self, x: int, y: int) -> bool:
        return (x, y) in self.successors

    @property
    def first(self) -> Optional[int]:
        return self.elements[0] if self.elements else None

    @property
    def last(self) -> Optional[int]:
        return self.elements[-1] if self.elements else None

    def below(self, x: int) -> Tuple[int, ...]:
        """Strict initial segment below x."""
        return self.elements[:self.position[x]]

    def between(self, x: int, y: int) -> Tuple[int, ...]:
        low, high = sorted((self.position[x], self.position[y]))
        return self.elements[low + 1:high]

    def restrict(self, subset: Iterable[int]) -> "FiniteOrder":
        keep = set(subset)
        return FiniteOrder(
            [x for x in self.elements if x in keep],
            [(x, y) for x, y in self.successors if x in keep and y in keep],
        )

    def relation_matrix(self) -> np.ndarray:
        ranks = np.arange(len(self.elements))
        return ranks[:, None] <= ranks[None, :]

    def agrees_with(self, other: "FiniteOrder") -> bool:
        """Both orders rank the shared elements alike."""
        shared = [x for x in self.elements if x in other]
        return [x for x in other.elements if x in self] == shared

    # -- export

    def export(self) -> str:
        """One ``x <= y`` line per pair of the relation, in order of x then y."""
        lines = []
        for i, x in enumerate(self.elements):
            for y in self.elements[i:]:
                lines.append(f"{x} <= {y}")
        return "\n".join(lines) + ("\n" if lines else "")

    @staticmethod
    def parse_export(text: str) -> "FiniteOrder":
        pairs = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            left, _, right = line.partition("<=")
            pairs.append((int(left), int(right)))
        return FiniteOrder.from_pairs(pairs)

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "successors": sorted([x, y] for x, y in self.successors)}

    @staticmethod
    def from_dict(data: dict) -> "FiniteOrder":
        return FiniteOrder(data["elements"], [tuple(pair) for pair in data.get("successors", [])])


@dataclass
class PrefixEvidence:
    """
        Snapshots of one presentation explored at increasing bounds.

        ``labels`` optionally maps elements to a block index (the label of the
        stage machine that created them). ``outer_labels`` maps block indices
        to the block one level up, for nested templates.
    """
    bounds: List[int] = field(default_factory=list)
    snapshots: List[FiniteOrder] = field(default_factory=list)
    labels: Dict[int, int] = field(default_factory=dict)
    outer_labels: Dict[int, int] = field(default_factory=dict)

    def add(self, bound: int, snapshot: FiniteOrder) -> "PrefixEvidence":
        self.bounds.append(bound)
        self.snapshots.append(snapshot)
        return self

    @property
    def final(self) -> FiniteOrder:
        return self.snapshots[-1] if self.snapshots else FiniteOrder()

    def pairs(self) -> Iterator[Tuple[FiniteOrder, FiniteOrder]]:
        return zip(self.snapshots, self.snapshots[1:])

    def to_dict(self) -> dict:
        return {
            "bounds": list(self.bounds),
            "snapshots": [snapshot.to_dict() for snapshot in self.snapshots],
            "labels": {str(k): v for k, v in sorted(self.labels.items())},
            "outer_labels": {str(k): v for k, v in sorted(self.outer_labels.items())},
        }
