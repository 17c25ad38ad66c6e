"""Cantor normal form ordinals below epsilon_0."""
from __future__ import annotations

from functools import total_ordering
from typing import List, Tuple, Union

import pyparsing as pp

from src.errors import NotLimitError, OrdinalError


@total_ordering
class CnfOrdinal:
    """
    w^e1·c1 + ... + w^ek·ck with e1 > ... > ek and every ci > 0.

    Exponents are CnfOrdinals themselves; zero is the empty sum.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Tuple[Tuple["CnfOrdinal", int], ...] = ()):
        terms = tuple(terms)
        for index, (exponent, coefficient) in enumerate(terms):
            if coefficient <= 0:
                raise OrdinalError(f"Coefficient must be positive, got {coefficient}")
            if index and compare(terms[index - 1][0], exponent) <= 0:
                raise OrdinalError("Exponents must be strictly decreasing")
        self.terms = terms
        self._hash = None

    # -- constructors

    @staticmethod
    def from_int(n: int) -> "CnfOrdinal":
        if n < 0:
            raise OrdinalError(f"Negative ordinal {n}")
        return CnfOrdinal(((ZERO, n),)) if n else ZERO

    # -- predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_natural(self) -> bool:
        return all(exponent.is_zero() for exponent, _ in self.terms)

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def natural_value(self) -> int:
        if not self.is_natural():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def leading_exponent(self) -> "CnfOrdinal":
        return self.terms[0][0] if self.terms else ZERO

    def as_power_terms(self) -> List["CnfOrdinal"]:
        """Exponents m1 >= m2 >= ... with self = w^m1 + w^m2 + ..."""
        powers = []
        for exponent, coefficient in self.terms:
            powers.extend([exponent] * coefficient)
        return powers

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            other = CnfOrdinal.from_int(other)
        if not isinstance(other, CnfOrdinal):
            return NotImplemented
        return add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return add(CnfOrdinal.from_int(other), self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            other = CnfOrdinal.from_int(other)
        if not isinstance(other, CnfOrdinal):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return mul(CnfOrdinal.from_int(other), self)
        return NotImplemented

    def succ(self) -> "CnfOrdinal":
        return add(self, ONE)

    # -- comparison

    def __eq__(self, other):
        if isinstance(other, int):
            return other >= 0 and compare(self, CnfOrdinal.from_int(other)) == 0
        if not isinstance(other, CnfOrdinal):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other):
        if isinstance(other, int):
            other = CnfOrdinal.from_int(other)
        if not isinstance(other, CnfOrdinal):
            return NotImplemented
        return compare(self, other) < 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self):
        return f"CnfOrdinal({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


ZERO = CnfOrdinal()
ONE = CnfOrdinal(((ZERO, 1),))
OMEGA = CnfOrdinal(((ONE, 1),))


def compare(a: CnfOrdinal, b: CnfOrdinal) -> int:
    """-1, 0 or 1, the order of the standard notation system."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        sign = compare(ea, eb)
        if sign:
            return sign
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) == len(b.terms):
        return 0
    return -1 if len(a.terms) < len(b.terms) else 1


def add(a: CnfOrdinal, b: CnfOrdinal) -> CnfOrdinal:
    if b.is_zero():
        return a
    lead = b.terms[0][0]
    kept = [term for term in a.terms if compare(term[0], lead) > 0]
    same = [term for term in a.terms if compare(term[0], lead) == 0]
    head = (lead, b.terms[0][1] + (same[0][1] if same else 0))
    return CnfOrdinal(tuple(kept) + (head,) + b.terms[1:])


def mul(a: CnfOrdinal, b: CnfOrdinal) -> CnfOrdinal:
    if a.is_zero() or b.is_zero():
        return ZERO
    lead = a.leading_exponent
    result = ZERO
    for exponent, coefficient in b.terms:
        if exponent.is_zero():
            scaled = CnfOrdinal(((lead, a.terms[0][1] * coefficient),) + a.terms[1:])
        else:
            scaled = CnfOrdinal(((add(lead, exponent), coefficient),))
        result = add(result, scaled)
    return result


def omega_pow(a: CnfOrdinal) -> CnfOrdinal:
    return CnfOrdinal(((a, 1),))


def fundamental_sequence(a: CnfOrdinal, n: int) -> CnfOrdinal:
    """
    Standard assignment: (g + w^(b+1))[n] = g + w^b·n and (g + w^l)[n] = g + w^(l[n]).

    :raises NotLimitError: when ``a`` is zero or a successor
    """
    if not a.is_limit():
        raise NotLimitError(f"{a} is not a limit ordinal")
    exponent, coefficient = a.terms[-1]
    prefix = a.terms[:-1] + (((exponent, coefficient - 1),) if coefficient > 1 else ())
    gamma = CnfOrdinal(prefix)
    if exponent.is_successor():
        lower = CnfOrdinal(exponent.terms[:-1] + (((ZERO, exponent.terms[-1][1] - 1),) if exponent.terms[-1][1] > 1 else ()))
        return add(gamma, mul(omega_pow(lower), CnfOrdinal.from_int(n)))
    return add(gamma, omega_pow(fundamental_sequence(exponent, n)))


# ---------------------------------------------------------------- text form


def _exponent_text(e: CnfOrdinal) -> str:
    if e.is_natural():
        return str(e.natural_value())
    if e == OMEGA:
        return "w"
    return f"({to_text(e)})"


def to_text(a: CnfOrdinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for exponent, coefficient in a.terms:
        if exponent.is_zero():
            parts.append(str(coefficient))
            continue
        base = "w" if exponent == ONE else f"w^{_exponent_text(exponent)}"
        parts.append(base if coefficient == 1 else f"{base}·{coefficient}")
    return " + ".join(parts)


def _sum(tokens):
    result = ZERO
    for token in tokens:
        result = add(result, token)
    return result


def _power(tokens):
    exponent = tokens[0] if len(tokens) else ONE
    return omega_pow(exponent)


def _scaled(tokens):
    result = tokens[0]
    for factor in tokens[1:]:
        result = mul(result, CnfOrdinal.from_int(int(factor)))
    return result


_Ordinal = pp.Forward()
_Natural = pp.Word(pp.nums).setParseAction(lambda t: CnfOrdinal.from_int(int(t[0])))
_OmegaSymbol = pp.oneOf("w ω")
_ExponentAtom = _Natural | (pp.Suppress("(") + _Ordinal + pp.Suppress(")")) | _OmegaSymbol.copy().setParseAction(lambda: OMEGA)
_Power = (pp.Suppress(_OmegaSymbol) + pp.Optional(pp.Suppress("^") + _ExponentAtom)).setParseAction(_power)
_Term = ((_Power | _Natural) + pp.ZeroOrMore(pp.Suppress(pp.oneOf("· *")) + pp.Word(pp.nums))).setParseAction(_scaled)
_Ordinal <<= (_Term + pp.ZeroOrMore(pp.Suppress("+") + _Term)).setParseAction(_sum)


def parse_ordinal(text: Union[str, int, CnfOrdinal]) -> CnfOrdinal:
    """Inverse of ``to_text``; also accepts ``*`` for the product dot and ``ω`` for ``w``."""
    if isinstance(text, CnfOrdinal):
        return text
    if isinstance(text, int):
        return CnfOrdinal.from_int(text)
    try:
        return _Ordinal.parseString(text, parseAll=True)[0]
    except pp.ParseException as exc:
        raise OrdinalError(f"Cannot parse ordinal {text!r}", str(exc)) from None
