"""Diagonal fixed points and Sigma_1 shape handling."""
from __future__ import annotations

from typing import List, Optional, Tuple

from src.errors import FormulaError, ShapeError
from src.logic.formula import (
    And,
    Apply,
    Exists,
    Forall,
    Formula,
    Num,
    Or,
    Var,
    free_vars,
    is_literal,
    normalize,
    substitute,
    subformulas,
)
from src.logic.goedel import goedel_encode, name_code


def _fresh_name(taken, base: str) -> str:
    if base not in taken:
        return base
    index = 1
    while f"{base}{index}" in taken:
        index += 1
    return f"{base}{index}"


def diagonal_fixed_point(F: Formula, var: Optional[str] = None) -> Formula:
    """
    Fixed point delta of F in its distinguished variable ``var``.

    With D(u) = F[var := sub(u, <u>, u)], delta is D[u := <D>]. The term
    sub(<D>, <u>, <D>) evaluates to the code of delta, so delta and F(<delta>)
    receive the same verdict at every fuel.

    :param F: formula whose distinguished variable receives a code
    :param var: distinguished variable; may be omitted when F has one free variable
    :raises FormulaError: when the distinguished variable is ambiguous or absent
    """
    free = free_vars(F)
    if var is None:
        if len(free) != 1:
            raise FormulaError("Ambiguous distinguished variable", "free variables: " + (", ".join(sorted(free)) or "none"))
        var = next(iter(free))
    elif var not in free:
        raise FormulaError(f"<{var}> is not free in the formula")

    u = _fresh_name(free, "u")
    diagonalized = Apply("sub", (Var(u), Num(name_code(u)), Var(u)))
    D = normalize(substitute(F, {var: diagonalized}))
    return substitute(D, {u: Num(goedel_encode(D))})


def fixed_point_instance(F: Formula, delta: Formula, var: Optional[str] = None) -> Formula:
    """F with the numeral of delta's code in the distinguished variable."""
    if var is None:
        var = next(iter(free_vars(F)))
    return substitute(F, {var: Num(goedel_encode(delta))})


# ---------------------------------------------------------------- Sigma_1 shape


def is_delta0(f: Formula) -> bool:
    return all(not (isinstance(g, (Exists, Forall)) and g.bound is None) for g in subformulas(f))


def is_sigma1(f: Formula) -> bool:
    """A block of unbounded existential quantifiers over a matrix whose quantifiers are all bounded."""
    while isinstance(f, Exists) and f.bound is None:
        f = f.body
    return is_delta0(f)


def sigma1_prenex(f: Formula) -> Formula:
    """
    Pull unbounded existentials out of conjunctions and disjunctions.

    :raises ShapeError: on an unbounded universal, or an unbounded existential under a bounded quantifier
    """
    prefix: List[str] = []
    taken = set(free_vars(f))

    def pull(g: Formula) -> Formula:
        if is_literal(g):
            return g
        if isinstance(g, And):
            return And(pull(g.left), pull(g.right))
        if isinstance(g, Or):
            return Or(pull(g.left), pull(g.right))
        if g.bound is not None:
            if not is_delta0(g.body):
                raise ShapeError("Unbounded quantifier below a bounded one")
            return g
        if isinstance(g, Forall):
            raise ShapeError("Unbounded universal quantifier in a Sigma_1 candidate")
        name = _fresh_name(taken, "w")
        taken.add(name)
        prefix.append(name)
        return pull(substitute(g.body, {g.var: Var(name)}))

    matrix = pull(f)
    result = matrix
    for name in reversed(prefix):
        result = Exists(name, result)
    return normalize(result)


def quantifier_prefix(f: Formula) -> Tuple[str, ...]:
    """Sequence of 'E'/'A' for the leading unbounded quantifiers."""
    shape = []
    while isinstance(f, (Exists, Forall)) and f.bound is None:
        shape.append("E" if isinstance(f, Exists) else "A")
        f = f.body
    return tuple(shape)
