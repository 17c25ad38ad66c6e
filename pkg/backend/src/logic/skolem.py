"""Skolemization into a single unary function symbol and the tree predicate built on it."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from src.errors import FormulaError
from src.logic.evaluate import UndefinedValue, evaluate_open
from src.logic.formula import (
    And,
    Apply,
    Forall,
    Formula,
    Num,
    Or,
    Term,
    Var,
    conjunction,
    free_vars,
    is_literal,
    negate,
    normalize,
    substitute,
    to_text,
)
from src.logic.goedel import seq_decode

SKOLEM_SYMBOL = "f"
UNIVERSAL_VARIABLE = "x"


@dataclass(frozen=True)
class SkolemEntry:
    """One existential subformula and the slot of the merged symbol that witnesses it."""
    index: int
    subformula: str
    arguments: Tuple[str, ...]
    universal: bool


@dataclass
class SkolemTable:
    """
    Merge record. The witness of entry i at arguments ys is ``f(pair(i, tuple(ys)))``,
    and the Skolem axioms read their variables from ``x`` through right-nested pairs.
    """
    entries: List[SkolemEntry] = field(default_factory=list)
    axiom_variables: List[Tuple[str, ...]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "symbol": SKOLEM_SYMBOL,
            "variable": UNIVERSAL_VARIABLE,
            "pairing": "(i+j)^2+i",
            "entries": [
                {"index": e.index, "subformula": e.subformula, "arguments": list(e.arguments), "from_forall": e.universal}
                for e in self.entries
            ],
            "axiom_variables": [list(v) for v in self.axiom_variables],
        }


def tuple_term(terms: Sequence[Term]) -> Term:
    if not terms:
        return Num(0)
    result = terms[-1]
    for term in reversed(terms[:-1]):
        result = Apply("pair", (term, result))
    return result


def projection(source: Term, index: int, width: int) -> Term:
    """Component ``index`` of a right-nested ``width``-tuple coded by ``source``."""
    term = source
    for _ in range(index):
        term = Apply("right", (term,))
    if index < width - 1:
        term = Apply("left", (term,))
    return term


class _Skolemizer:

    def __init__(self):
        self.table = SkolemTable()
        self.axioms: List[Tuple[Tuple[str, ...], Formula]] = []
        self._fresh = 0

    def fresh(self) -> str:
        self._fresh += 1
        return f"y{self._fresh}"

    def witness(self, index: int, scope: Sequence[str]) -> Term:
        return Apply(SKOLEM_SYMBOL, (Apply("pair", (Num(index), tuple_term([Var(v) for v in scope]))),))

    def run(self, f: Formula, scope: Tuple[str, ...]) -> Formula:
        if is_literal(f):
            return f
        if isinstance(f, And):
            return And(self.run(f.left, scope), self.run(f.right, scope))
        if isinstance(f, Or):
            return Or(self.run(f.left, scope), self.run(f.right, scope))

        var = self.fresh()
        body = substitute(f.body, {f.var: Var(var)})
        if f.bound is not None:
            node = type(f)(var, self.run(body, scope + (var,)), f.bound)
            return node

        index = len(self.table.entries)
        universal = isinstance(f, Forall)
        self.table.entries.append(SkolemEntry(index, to_text(f), scope, universal))
        xi = negate(body) if universal else body
        xi_prime = self.run(xi, scope + (var,))
        witnessed = substitute(xi_prime, {var: self.witness(index, scope)})
        self.axioms.append((scope + (var,), Or(negate(xi_prime), witnessed)))
        return negate(witnessed) if universal else witnessed


def skolemize(f: Formula) -> Tuple[Formula, SkolemTable]:
    """
    Matrix psi(f, x) with  f  Skolem-equivalent to the sentence: it is true iff some f makes psi(f, x) true for all x.

    Existential subformulas get witnesses f(<i, ys>); a universal one is read as
    the negation of an existential and gets a counterexample candidate. Skolem
    axioms are conjoined in left-to-right subformula order, each reading its
    variables from x.
    """
    if free_vars(f):
        raise FormulaError("skolemize expects a sentence", ", ".join(sorted(free_vars(f))))
    worker = _Skolemizer()
    target = worker.run(f, ())

    parts = []
    source = Var(UNIVERSAL_VARIABLE)
    for variables, axiom in worker.axioms:
        mapping = {v: projection(source, i, len(variables)) for i, v in enumerate(variables)}
        parts.append(substitute(axiom, mapping))
        worker.table.axiom_variables.append(variables)
    parts.append(target)
    return normalize(conjunction(parts)), worker.table


class PartialFunction:
    """i -> values[i] on the finite domain {0, ..., len(values) - 1}."""

    def __init__(self, values: Sequence[int]):
        self.values = tuple(values)

    def __call__(self, argument: int) -> int:
        if 0 <= argument < len(self.values):
            return self.values[argument]
        raise UndefinedValue(argument)


def theta_test(seq: Union[int, Sequence[int]], psi: Formula) -> bool:
    """
    True iff the sequence (x, f(0), f(1), ...) already makes psi(f, x) false.

    Undefined values of f leave psi undecided, and undecided counts as false.
    """
    values = seq_decode(seq) if isinstance(seq, int) else tuple(seq)
    if not values:
        return False
    value: Optional[bool] = evaluate_open(
        psi,
        {UNIVERSAL_VARIABLE: values[0]},
        fuel=0,
        interpretation={SKOLEM_SYMBOL: PartialFunction(values[1:])},
    )
    return value is False
