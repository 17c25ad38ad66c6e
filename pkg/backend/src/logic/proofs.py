"""
A small Hilbert-style calculus and its proof checker.

A proof is the sequence code of its lines; a line is the sequence code of
[rule, formula, a, b]. ``a`` and ``b`` point to earlier lines, or carry a
numeral or a variable-name code, depending on the rule:

    rule  name              check
    0     premise           none; counted by plen/prem
    1     eq-refl           formula is t = t
    2     excluded-middle   formula is A or not A
    3     mp                line a is A, line b is (not A) or B, formula is B
    4     gen               formula is forall v. (line a) with v named by b, v not free in a premise
    5     inst              line a is forall v. A, formula is A(b)
    6     ex-intro          formula is exists v. A with A(b) equal to line a
    7     or-intro          formula is A or B with line a equal to A or to B
    8     and-intro         formula is (line a) and (line b)
    9     or-comm           line a is A or B, formula is B or A
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.errors import GoedelDecodeError
from src.logic.evaluate import host_function, host_relation
from src.logic.formula import And, Eq, Exists, Forall, Formula, Or, free_vars, instantiate, negate, normalize
from src.logic.goedel import goedel_decode, goedel_encode, name_decode, seq_decode, seq_encode

RULES = ("premise", "eq-refl", "excluded-middle", "mp", "gen", "inst", "ex-intro", "or-intro", "and-intro", "or-comm")


@dataclass(frozen=True)
class ProofLine:
    rule: str
    formula: Formula
    a: int = 0
    b: int = 0

    def code(self) -> int:
        return seq_encode([RULES.index(self.rule), goedel_encode(self.formula), self.a, self.b])


def encode_proof(lines: Sequence[ProofLine]) -> int:
    return seq_encode([line.code() for line in lines])


def decode_proof(d: int) -> Optional[List[Tuple[int, Formula, int, int]]]:
    try:
        lines = []
        for line_code in seq_decode(d):
            fields = seq_decode(line_code)
            if len(fields) != 4 or fields[0] >= len(RULES):
                return None
            lines.append((fields[0], goedel_decode(fields[1]), fields[2], fields[3]))
        return lines
    except (GoedelDecodeError, RecursionError):
        return None


def _line_ok(index: int, rule: int, formula: Formula, a: int, b: int, lines, premise_vars) -> bool:
    name = RULES[rule]
    earlier = [line[1] for line in lines[:index]]

    def ref(k: int) -> Optional[Formula]:
        return earlier[k] if 0 <= k < len(earlier) else None

    if name == "premise":
        return True
    if name == "eq-refl":
        return isinstance(formula, Eq) and not formula.negated and formula.left == formula.right
    if name == "excluded-middle":
        return isinstance(formula, Or) and formula.right == negate(formula.left)
    if name == "mp":
        major, minor = ref(a), ref(b)
        return major is not None and minor == Or(negate(major), formula)
    if name == "gen":
        premise = ref(a)
        try:
            var = name_decode(b)
        except GoedelDecodeError:
            return False
        return premise is not None and var not in premise_vars and formula == normalize(Forall(var, premise))
    if name == "inst":
        general = ref(a)
        return isinstance(general, Forall) and general.bound is None and instantiate(general, b) == formula
    if name == "ex-intro":
        return isinstance(formula, Exists) and formula.bound is None and instantiate(formula, b) == ref(a)
    if name == "or-intro":
        part = ref(a)
        return isinstance(formula, Or) and part is not None and part in (formula.left, formula.right)
    if name == "and-intro":
        return ref(a) is not None and ref(b) is not None and formula == And(ref(a), ref(b))
    source = ref(a)
    return isinstance(source, Or) and formula == Or(source.right, source.left)


def check_proof(d: int, c: Optional[int] = None) -> bool:
    """True iff ``d`` is a valid proof, ending in the formula coded by ``c`` when given."""
    lines = decode_proof(d)
    if not lines:
        return False
    premise_vars = set()
    for rule, formula, _, _ in lines:
        if RULES[rule] == "premise":
            premise_vars |= free_vars(formula)
    for index, (rule, formula, a, b) in enumerate(lines):
        if not _line_ok(index, rule, formula, a, b, lines, premise_vars):
            return False
    return c is None or goedel_encode(lines[-1][1]) == c


def premises(d: int) -> List[int]:
    lines = decode_proof(d) or []
    return [goedel_encode(formula) for rule, formula, _, _ in lines if RULES[rule] == "premise"]


@host_relation("Proof")
def _proof(_, d, c):
    return check_proof(d, c)


@host_function("plen")
def _plen(_, d):
    return len(premises(d))


@host_function("prem")
def _prem(_, d, i):
    found = premises(d)
    return found[i] if 0 <= i < len(found) else 0
