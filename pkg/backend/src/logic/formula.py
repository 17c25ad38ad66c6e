"""Negation-normal-form arithmetic formulas and terms."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, Optional, Tuple, Union

from src.errors import FormulaError

BOUND_NAME = re.compile(r"^v\d+$")


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Num:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise FormulaError(f"Negative numeral {self.value}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Apply:
    """Function application: a host primitive (``pair``, ``sub``...) or an uninterpreted Skolem symbol."""
    fn: str
    args: Tuple["Term", ...]


Term = Union[Num, Var, Succ, Add, Mul, Apply]


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term
    negated: bool = False


@dataclass(frozen=True)
class Lt:
    left: Term
    right: Term
    negated: bool = False


@dataclass(frozen=True)
class Rel:
    """Host primitive relation such as ``Le`` or ``Proof``."""
    name: str
    args: Tuple[Term, ...]
    negated: bool = False


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"
    bound: Optional[Term] = None


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"
    bound: Optional[Term] = None


Literal = Union[Eq, Lt, Rel]
Formula = Union[Eq, Lt, Rel, And, Or, Exists, Forall]
LITERALS = (Eq, Lt, Rel)
QUANTIFIERS = (Exists, Forall)


def is_literal(f: Formula) -> bool:
    return isinstance(f, LITERALS)


def is_unbounded(f: Formula) -> bool:
    return isinstance(f, QUANTIFIERS) and f.bound is None


def negate(f: Formula) -> Formula:
    """De Morgan dual; an involution on NNF formulas."""
    if isinstance(f, Eq):
        return Eq(f.left, f.right, not f.negated)
    if isinstance(f, Lt):
        return Lt(f.left, f.right, not f.negated)
    if isinstance(f, Rel):
        return Rel(f.name, f.args, not f.negated)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, Exists):
        return Forall(f.var, negate(f.body), f.bound)
    if isinstance(f, Forall):
        return Exists(f.var, negate(f.body), f.bound)
    raise FormulaError(f"Not a formula: {f!r}")


def implies(a: Formula, b: Formula) -> Formula:
    return Or(negate(a), b)


def conjunction(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Eq(Num(0), Num(0))
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def disjunction(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Eq(Num(0), Num(0), True)
    result = parts[0]
    for part in parts[1:]:
        result = Or(result, part)
    return result


# ---------------------------------------------------------------- variables


def term_vars(t: Term) -> FrozenSet[str]:
    if isinstance(t, Num):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Succ):
        return term_vars(t.arg)
    if isinstance(t, (Add, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Apply):
        return frozenset().union(*(term_vars(a) for a in t.args)) if t.args else frozenset()
    raise FormulaError(f"Not a term: {t!r}")


def free_vars(f: Formula) -> FrozenSet[str]:
    if isinstance(f, (Eq, Lt)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Rel):
        return frozenset().union(*(term_vars(a) for a in f.args)) if f.args else frozenset()
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        inner = free_vars(f.body) - {f.var}
        return inner | term_vars(f.bound) if f.bound is not None else inner
    raise FormulaError(f"Not a formula: {f!r}")


def term_functions(t: Term) -> FrozenSet[str]:
    if isinstance(t, (Num, Var)):
        return frozenset()
    if isinstance(t, Succ):
        return term_functions(t.arg)
    if isinstance(t, (Add, Mul)):
        return term_functions(t.left) | term_functions(t.right)
    return frozenset((t.fn,)).union(*(term_functions(a) for a in t.args))


def functions(f: Formula) -> FrozenSet[str]:
    """Names of every function symbol applied in ``f``."""
    return frozenset().union(*(term_functions(t) for t in terms(f)))


def terms(f: Formula) -> Iterator[Term]:
    if isinstance(f, (Eq, Lt)):
        yield f.left
        yield f.right
    elif isinstance(f, Rel):
        yield from f.args
    elif isinstance(f, (And, Or)):
        yield from terms(f.left)
        yield from terms(f.right)
    else:
        if f.bound is not None:
            yield f.bound
        yield from terms(f.body)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order, left to right."""
    yield f
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from subformulas(f.body)


# ---------------------------------------------------------------- substitution


def substitute_term(t: Term, mapping: Dict[str, Term]) -> Term:
    if isinstance(t, Num):
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Succ):
        return Succ(substitute_term(t.arg, mapping))
    if isinstance(t, Add):
        return Add(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    return Apply(t.fn, tuple(substitute_term(a, mapping) for a in t.args))


def _fresh(avoid, base: str = "z") -> str:
    index = 0
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


def substitute(f: Formula, mapping: Dict[str, Term]) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    if not mapping:
        return f
    if isinstance(f, Eq):
        return Eq(substitute_term(f.left, mapping), substitute_term(f.right, mapping), f.negated)
    if isinstance(f, Lt):
        return Lt(substitute_term(f.left, mapping), substitute_term(f.right, mapping), f.negated)
    if isinstance(f, Rel):
        return Rel(f.name, tuple(substitute_term(a, mapping) for a in f.args), f.negated)
    if isinstance(f, And):
        return And(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Or):
        return Or(substitute(f.left, mapping), substitute(f.right, mapping))

    bound = substitute_term(f.bound, mapping) if f.bound is not None else None
    inner = {k: v for k, v in mapping.items() if k != f.var}
    if not inner:
        return type(f)(f.var, f.body, bound)
    incoming = frozenset().union(*(term_vars(t) for t in inner.values()))
    var, body = f.var, f.body
    if var in incoming:
        var = _fresh(incoming | free_vars(body) | set(inner), base=f.var + "_")
        body = substitute(body, {f.var: Var(var)})
    return type(f)(var, substitute(body, inner), bound)


def instantiate(f: Formula, value: int) -> Formula:
    """Body of the quantifier ``f`` with the numeral ``value`` for its variable."""
    if not isinstance(f, QUANTIFIERS):
        raise FormulaError("instantiate expects a quantifier")
    return normalize(substitute(f.body, {f.var: Num(value)}))


# ---------------------------------------------------------------- normalization


def normalize(f: Formula, _depth: int = 0, _env: Optional[Dict[str, str]] = None) -> Formula:
    """
    Canonical renaming: the variable bound at nesting depth d becomes ``v{d}``.

    Free variables must not look like canonical names, otherwise they could be captured.
    """
    env = _env or {}
    if _depth == 0 and _env is None:
        clash = [name for name in free_vars(f) if BOUND_NAME.match(name)]
        if clash:
            raise FormulaError("Free variables may not use the reserved v<digits> names", ", ".join(sorted(clash)))

    rename = {old: Var(new) for old, new in env.items()}
    if isinstance(f, (Eq, Lt, Rel)):
        return substitute_literal(f, rename)
    if isinstance(f, And):
        return And(normalize(f.left, _depth, env), normalize(f.right, _depth, env))
    if isinstance(f, Or):
        return Or(normalize(f.left, _depth, env), normalize(f.right, _depth, env))

    bound = substitute_term(f.bound, rename) if f.bound is not None else None
    name = f"v{_depth}"
    inner = dict(env)
    inner[f.var] = name
    return type(f)(name, normalize(f.body, _depth + 1, inner), bound)


def substitute_literal(f: Literal, mapping: Dict[str, Term]) -> Literal:
    if isinstance(f, Rel):
        return Rel(f.name, tuple(substitute_term(a, mapping) for a in f.args), f.negated)
    return type(f)(substitute_term(f.left, mapping), substitute_term(f.right, mapping), f.negated)


def rename_free(f: Formula, old: str, new: str) -> Formula:
    return normalize(substitute(f, {old: Var(new)}))


# ---------------------------------------------------------------- measures


def complexity(f: Formula) -> int:
    """Buildup complexity: literals 0, one per connective step, bounded quantifiers count their guard."""
    if is_literal(f):
        return 0
    if isinstance(f, (And, Or)):
        return complexity(f.left) + complexity(f.right) + 1
    if f.bound is not None:
        return complexity(f.body) + 2
    return complexity(f.body) + 1


def size(f) -> int:
    """Number of AST nodes, terms included."""
    if isinstance(f, (Num, Var)):
        return 1
    if isinstance(f, Succ):
        return 1 + size(f.arg)
    if isinstance(f, (Add, Mul, And, Or)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, (Eq, Lt)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, (Apply, Rel)):
        return 1 + sum(size(a) for a in f.args)
    return 1 + size(f.body) + (size(f.bound) if f.bound is not None else 0)


def numeral_term(value: int) -> Term:
    """``S(S(...0))``, the standard numeral."""
    term: Term = Num(0)
    for _ in range(value):
        term = Succ(term)
    return term


def unfold_bounded(f: Formula) -> Formula:
    """Bounded quantifier as its unbounded guard form: ∀x(¬x<t ∨ θ) or ∃x(x<t ∧ θ)."""
    if not isinstance(f, QUANTIFIERS) or f.bound is None:
        return f
    guard = Lt(Var(f.var), f.bound)
    if isinstance(f, Forall):
        return Forall(f.var, Or(negate(guard), f.body))
    return Exists(f.var, And(guard, f.body))


# ---------------------------------------------------------------- printing


def _term_operand(t: Term) -> str:
    text = term_to_text(t)
    return f"({text})" if isinstance(t, (Add, Mul)) else text


def term_to_text(t: Term) -> str:
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Succ):
        return f"S({term_to_text(t.arg)})"
    if isinstance(t, Add):
        return f"{_term_operand(t.left)} + {_term_operand(t.right)}"
    if isinstance(t, Mul):
        return f"{_term_operand(t.left)} * {_term_operand(t.right)}"
    return f"{t.fn}({', '.join(term_to_text(a) for a in t.args)})"


def _operand(f: Formula) -> str:
    text = to_text(f)
    return text if is_literal(f) else f"({text})"


def to_text(f: Formula) -> str:
    """Concrete syntax accepted back by ``parse``."""
    if isinstance(f, (Eq, Lt)):
        op = "=" if isinstance(f, Eq) else "<"
        core = f"{term_to_text(f.left)} {op} {term_to_text(f.right)}"
        return f"not ({core})" if f.negated else core
    if isinstance(f, Rel):
        core = f"{f.name}({', '.join(term_to_text(a) for a in f.args)})"
        return f"not {core}" if f.negated else core
    if isinstance(f, And):
        return f"{_operand(f.left)} and {_operand(f.right)}"
    if isinstance(f, Or):
        return f"{_operand(f.left)} or {_operand(f.right)}"
    keyword = "forall" if isinstance(f, Forall) else "exists"
    guard = f" < {term_to_text(f.bound)}" if f.bound is not None else ""
    return f"{keyword} {f.var}{guard}. {to_text(f.body)}"
