"""
Uniform reflection along computable orders.

A theory is given by a Sigma_1 recognizer Ax(y) of its axiom codes. Its
provability predicate is read off the proof checker::

    Prv(c) := exists d (Proof(d, c) and forall i < plen(d). Ax(prem(d, i)))

and the reflection instance of phi(x) is forall x (Prv(sub(<phi>, <x>, x)) -> phi(x)).

The progression recognizer Ax(x, y) along an order L is the diagonal fixed
point of

    Le(L, x, x) and (Ax_T(y) or exists z (z < x in L and RfnOver(y, <self>, z)))

where RfnOver(y, a, z) holds when y codes a reflection instance over the theory
recognized by the formula coded by a, with the numeral z for x. Notations use
the same construction with RfnAlong, which first walks the notation down.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from src.errors import (
    ArityError, GoedelDecodeError, ProgramError, ProgramSyntaxError, ProgressionError, RegistryError, ShapeError,
)
from src.logic.diagonal import diagonal_fixed_point, is_sigma1, sigma1_prenex
from src.logic.evaluate import TruthVerdict, evaluate_window, host_relation
from src.logic.formula import (
    Add,
    And,
    Apply,
    Eq,
    Exists,
    Forall,
    Formula,
    Lt,
    Mul,
    Num,
    Or,
    Rel,
    Succ,
    Term,
    Var,
    conjunction,
    disjunction,
    free_vars,
    implies,
    negate,
    normalize,
    substitute,
    terms,
    to_text,
)
from src.logic.goedel import goedel_decode, goedel_encode, name_code, name_decode, seq_len
from src.orders.presentation import OrderPresentation
from src.progressions.notations import NotationTerm, walk
from src.progressions.registry import ProgramRegistry, default_registry

AXIOM = "y"
STAGE = "x"


@dataclass(frozen=True)
class TheorySpec:
    """
        A theory by its axiom recognizer: a Sigma_1 formula whose only free variable is y.

        :raises ArityError: when the recognizer has another free variable
        :raises ShapeError: when the recognizer is not Sigma_1
    """
    name: str
    axiom: Formula

    def __post_init__(self):
        extra = free_vars(self.axiom) - {AXIOM}
        if extra:
            raise ArityError(f"Recognizer of <{self.name}> has free variables besides y", ", ".join(sorted(extra)))
        if not is_sigma1(self.axiom):
            raise ShapeError(f"Recognizer of <{self.name}> is not Sigma_1", to_text(self.axiom))

    @staticmethod
    def finite(name: str, axioms: Sequence[Formula]) -> "TheorySpec":
        """y is the code of one of the listed formulas."""
        codes = [goedel_encode(normalize(a)) for a in axioms]
        if not codes:
            return TheorySpec(name, Lt(Var(AXIOM), Num(0)))
        return TheorySpec(name, disjunction(Eq(Var(AXIOM), Num(code)) for code in codes))

    @staticmethod
    def schematic(name: str, template: Formula, var: str) -> "TheorySpec":
        """
        y is template[var := k] for some numeral k.

        :raises ArityError: unless ``var`` is the only free variable of the template
        """
        if free_vars(template) != {var}:
            raise ArityError(f"Schema of <{name}> must have exactly the free variable {var}")
        code = goedel_encode(normalize(template))
        instance = Apply("sub", (Num(code), Num(name_code(var)), Var("k")))
        return TheorySpec(name, normalize(Exists("k", Eq(Var(AXIOM), instance))))

    def provability(self, c: Term) -> Formula:
        """Prv(c)"""
        premise = substitute(self.axiom, {AXIOM: Apply("prem", (Var("d"), Var("i")))})
        body = Exists("d", And(Rel("Proof", (Var("d"), Var("c"))), Forall("i", premise, Apply("plen", (Var("d"),)))))
        return normalize(substitute(body, {"c": c}))

    def recognizes(self, code: int, fuel: int) -> TruthVerdict:
        """Window evaluation of Ax(code)."""
        return evaluate_window(substitute(self.axiom, {AXIOM: Num(code)}), fuel)

    def to_dict(self) -> dict:
        return {"name": self.name, "axiom": to_text(self.axiom)}


def render_reflection_instance(t: TheorySpec, phi: Formula) -> Formula:
    """
    forall x (Prv(sub(<phi>, <x>, x)) -> phi(x)) for the single free variable x of phi.

    :raises ArityError: unless phi has exactly one free variable
    """
    free = free_vars(phi)
    if len(free) != 1:
        raise ArityError("A reflection instance needs exactly one free variable", ", ".join(sorted(free)) or "none")
    var = next(iter(free))
    phi = normalize(phi)
    numeral = Apply("sub", (Num(goedel_encode(phi)), Num(name_code(var)), Var(var)))
    return normalize(Forall(var, Or(negate(t.provability(numeral)), phi)))


def stage_theory(recognizer: Formula, b: int, name: Optional[str] = None) -> TheorySpec:
    """The theory recognized by Ax(b, y) for a two-variable recognizer Ax(x, y)."""
    return TheorySpec(name or f"stage-{b}", substitute(recognizer, {STAGE: Num(b)}))


# ---------------------------------------------------------------- recognizing instances


def _applications(t: Term) -> Iterator[Apply]:
    if isinstance(t, Apply):
        yield t
        for arg in t.args:
            yield from _applications(arg)
    elif isinstance(t, Succ):
        yield from _applications(t.arg)
    elif isinstance(t, (Add, Mul)):
        yield from _applications(t.left)
        yield from _applications(t.right)


def _instance_candidates(f: Formula) -> Iterator[Formula]:
    """Formulas phi whose numeral sub(<phi>, <v>, v) occurs in f."""
    for t in terms(f):
        for application in _applications(t):
            if application.fn != "sub" or len(application.args) != 3:
                continue
            code, var, value = application.args
            if not (isinstance(code, Num) and isinstance(var, Num) and isinstance(value, Var)):
                continue
            try:
                phi = goedel_decode(code.value)
                name = name_decode(var.value)
            except (GoedelDecodeError, RecursionError):
                continue
            if isinstance(phi, (Eq, Lt, Rel, And, Or, Exists, Forall)) and free_vars(phi) == {name}:
                yield phi


@lru_cache(maxsize=4096)
def is_reflection_instance(y: int, axiom_code: int) -> bool:
    """y codes a reflection instance over the theory whose recognizer is coded by ``axiom_code``."""
    try:
        f = goedel_decode(y)
        theory = TheorySpec("", goedel_decode(axiom_code))
    except (GoedelDecodeError, RecursionError, ProgressionError):
        return False
    if not (isinstance(f, Forall) and f.bound is None and isinstance(f.body, Or)):
        return False
    return any(render_reflection_instance(theory, phi) == f for phi in _instance_candidates(f.body.left))


@lru_cache(maxsize=4096)
def reflects_over(y: int, recognizer_code: int, b: int) -> bool:
    try:
        recognizer = goedel_decode(recognizer_code)
    except (GoedelDecodeError, RecursionError):
        return False
    return is_reflection_instance(y, goedel_encode(substitute(recognizer, {STAGE: Num(b)})))


@host_relation("RfnOver")
def _rfn_over(_, y, recognizer_code, b):
    """RfnOver(y, a, b): y is a reflection instance over the theory Ax_a(b, .)."""
    return reflects_over(y, recognizer_code, b)


@host_relation("RfnAlong")
def _rfn_along(_, y, recognizer_code, a, s):
    """RfnAlong(y, r, a, s): s is a non-empty walk from the notation a to some b, and RfnOver(y, r, b)."""
    try:
        reached = walk(a, s)
    except (ProgramError, RegistryError):
        return None
    if reached == 0 or seq_len(s) == 0:
        return False
    return reflects_over(y, recognizer_code, reached - 1)


# ---------------------------------------------------------------- progressions


@lru_cache(maxsize=32)
def build_ax_progression(t: TheorySpec, p: OrderPresentation) -> Formula:
    """
    Sigma_1 recognizer Ax(x, y) of the progression of t along p.

    :raises ProgressionError: when p cannot be read back from its code
    """
    try:
        code = p.code()
        OrderPresentation.from_code(code)
    except ProgramSyntaxError as exc:
        raise ProgressionError(f"Presentation <{p.name}> is not serializable", exc.headline) from None
    x, y, z, w = Var(STAGE), Var(AXIOM), Var("z"), Var("w")
    lower = Exists("z", conjunction([Rel("Le", (Num(code), z, x)), Eq(z, x, True), Rel("RfnOver", (y, w, z))]))
    F = sigma1_prenex(And(Rel("Le", (Num(code), x, x)), Or(t.axiom, lower)))
    return diagonal_fixed_point(F, "w")


@lru_cache(maxsize=32)
def notation_recognizer(t: TheorySpec) -> Formula:
    """Ax(x, y) for the progression of t along notations: T plus reflection over every notation reached from x."""
    y, w, s = Var(AXIOM), Var("w"), Var("s")
    F = sigma1_prenex(Or(t.axiom, Exists("s", Rel("RfnAlong", (y, w, Var(STAGE), s)))))
    return diagonal_fixed_point(F, "w")


def rfn_case(a: NotationTerm, t: TheorySpec, registry: Optional[ProgramRegistry] = None) -> Formula:
    """
    Recognizer of RFN^a(T):

        2^b      RFN(RFN^b(T))
        3·5^e    T plus RFN(RFN^{e}(n)(T)) for every n
        other    T

    :raises RegistryError: when a limit index is not registered
    :raises ProgressionError: when a is too large to be written as a numeral
    """
    if a.shape == "other":
        return t.axiom
    if a.shape == "limit":
        (default_registry() if registry is None else registry).entry(a.e)
    value = a.value
    if value is None:
        raise ProgressionError(f"Notation {a} is too large to be written as a numeral")
    return substitute(notation_recognizer(t), {STAGE: Num(value)})


# ---------------------------------------------------------------- schemata


def _order_domain(code: int, x: Term, restrict_below: Optional[int]) -> Formula:
    if restrict_below is None:
        return Rel("Le", (Num(code), x, x))
    return And(Rel("Le", (Num(code), x, Num(restrict_below))), Eq(x, Num(restrict_below), True))


def render_TI_instance(p: OrderPresentation, phi: Formula, var: Optional[str] = None,
                       restrict_below: Optional[int] = None) -> Formula:
    """
    (forall x in L)((forall y < x) phi(y) -> phi(x)) -> (forall x in L) phi(x).

    With ``restrict_below`` b the quantifiers over L range over the elements below b.
    Other free variables of phi stay free as side parameters.

    :raises ArityError: when the induction variable is not given and phi does not have exactly one free variable
    """
    free = free_vars(phi)
    if var is None:
        if len(free) != 1:
            raise ArityError("Ambiguous induction variable", ", ".join(sorted(free)) or "none")
        var = next(iter(free))
    elif var not in free:
        raise ArityError(f"<{var}> is not free in the induction formula")
    code = p.code()
    x = _fresh(set(free), "a")
    y = _fresh(set(free) | {x}, "b")
    X, Y = Var(x), Var(y)

    def at(v: Term) -> Formula:
        return substitute(phi, {var: v})

    below = Forall(y, implies(And(Rel("Le", (Num(code), Y, X)), Eq(Y, X, True)), at(Y)))
    progressive = Forall(x, implies(_order_domain(code, X, restrict_below), implies(below, at(X))))
    conclusion = Forall(x, implies(_order_domain(code, X, restrict_below), at(X)))
    return normalize(implies(progressive, conclusion))


def _fresh(taken, base: str) -> str:
    name, index = base, 0
    while name in taken:
        index += 1
        name = f"{base}{index}"
    return name


def render_LO(p: OrderPresentation) -> Formula:
    """Le(L, ., .) is reflexive on its field, antisymmetric, transitive and total."""
    code = Num(p.code())

    def le(a: str, b: str) -> Formula:
        return Rel("Le", (code, Var(a), Var(b)))

    field = implies(le("a", "b"), And(le("a", "a"), le("b", "b")))
    antisymmetric = implies(And(le("a", "b"), le("b", "a")), Eq(Var("a"), Var("b")))
    transitive = implies(And(le("a", "b"), le("b", "c")), le("a", "c"))
    total = implies(And(le("a", "a"), le("b", "b")), Or(le("a", "b"), le("b", "a")))
    body = conjunction([field, antisymmetric, transitive, total])
    return normalize(Forall("a", Forall("b", Forall("c", body))))


def render_WO(p: OrderPresentation) -> str:
    """Second-order, so only as text: LO(L) and every non-empty subset of L has a least element."""
    code = p.code()
    return (
        f"{to_text(render_LO(p))} and forall Y. ((exists x. (x in Y and Le({code}, x, x))) -> "
        f"exists x. (x in Y and Le({code}, x, x) and forall y. ((y in Y and Le({code}, y, y)) -> Le({code}, x, y))))"
    )
