"""Arithmetic Formula Grammar

Terms:

    0, 1, 42                    Numerals
    x, y1                       Variables (lower case)
    S(t)                        Successor
    t + u, t * u                Addition, multiplication
    pair(t, u)                  Host primitive function (lower case name)

Atoms:

    t = u, t != u               Equality
    t < u, t <= u, t > u, t >= u
    Le(p, x, y)                 Host primitive relation (capitalised name)

Connectives, loosest first:

    A -> B                      Implication (right associative)
    A or B
    A and B
    not A

Quantifiers (the body extends as far right as possible):

    forall x. A
    exists y < t. A             Bounded quantifier

The parser returns the NNF, canonically renamed formula.
"""
from __future__ import annotations

from typing import Iterable

import pyparsing as pp

from src.errors import FormulaSyntaxError, UnboundVariableError
from src.logic.formula import (
    Add,
    Apply,
    Eq,
    Exists,
    Forall,
    Lt,
    Mul,
    Num,
    Or,
    And,
    Rel,
    Succ,
    Var,
    free_vars,
    negate,
    normalize,
)

pp.ParserElement.enablePackrat()


# Helpers
# -----------------------------------------------------------------------------

def make_list(expr: pp.ParserElement, opener="(", closer=")") -> pp.ParserElement:
    return pp.Suppress(opener) + pp.Optional(pp.delimitedList(expr)) + pp.Suppress(closer)


def binary_operator(node):
    def parse_action(tokens):
        tokens = tokens[0]
        operands = list(tokens[::2])
        result = operands[0]
        for operand in operands[1:]:
            result = node(result, operand)
        return result

    return parse_action


def implication(tokens):
    tokens = tokens[0]
    operands = list(tokens[::2])
    result = operands.pop()
    for operand in reversed(operands):
        result = Or(negate(operand), result)
    return result


def negation(tokens):
    return negate(tokens[0][1])


def comparison(tokens):
    left, op, right = tokens
    if op == "=":
        return Eq(left, right)
    if op == "!=":
        return Eq(left, right, True)
    if op == "<":
        return Lt(left, right)
    if op == ">":
        return Lt(right, left)
    if op == "<=":
        return Lt(left, Succ(right))
    return Lt(right, Succ(left))


def quantifier(tokens):
    keyword, var = tokens[0], tokens[1]
    bound = tokens[2] if len(tokens) == 4 else None
    body = tokens[-1]
    node = Forall if keyword == "forall" else Exists
    return node(var, body, bound)


# Grammar
# -----------------------------------------------------------------------------

FORALL = pp.Keyword("forall")
EXISTS = pp.Keyword("exists")
AND = pp.Keyword("and")
OR = pp.Keyword("or")
NOT = pp.Keyword("not")
IMPLIES = pp.Literal("->")
SUCC = pp.Keyword("S")

Keyword = FORALL | EXISTS | AND | OR | NOT

Term = pp.Forward()
Formula = pp.Forward()

Identifier = ~Keyword + pp.Regex(r"[a-z_][A-Za-z0-9_]*")
RelationName = ~SUCC + pp.Regex(r"[A-Z][A-Za-z0-9_]*")

Numeral = pp.Regex(r"\d+").setParseAction(lambda t: Num(int(t[0])))
Successor = (pp.Suppress(SUCC) + pp.Suppress("(") + Term + pp.Suppress(")")).setParseAction(lambda t: Succ(t[0]))
Function = (Identifier + pp.Group(make_list(Term))).setParseAction(lambda t: Apply(t[0], tuple(t[1])))
Variable = Identifier.copy().setParseAction(lambda t: Var(t[0]))

TermAtom = Numeral | Successor | Function | Variable

Term <<= pp.infixNotation(TermAtom, [
    (pp.Literal("*"), 2, pp.opAssoc.LEFT, binary_operator(Mul)),
    (pp.Literal("+"), 2, pp.opAssoc.LEFT, binary_operator(Add)),
])

Comparator = pp.oneOf("<= >= != = < >")
Comparison = (Term + Comparator + Term).setParseAction(comparison)
Relation = (RelationName + pp.Group(make_list(Term))).setParseAction(lambda t: Rel(t[0], tuple(t[1])))

Quantified = (
    (FORALL | EXISTS)
    + Identifier
    + pp.Optional(pp.Suppress("<") + Term)
    + pp.Suppress(".")
    + Formula
).setParseAction(quantifier)

Formula <<= pp.infixNotation(Quantified | Relation | Comparison, [
    (NOT, 1, pp.opAssoc.RIGHT, negation),
    (AND, 2, pp.opAssoc.LEFT, binary_operator(And)),
    (OR, 2, pp.opAssoc.LEFT, binary_operator(Or)),
    (IMPLIES, 2, pp.opAssoc.RIGHT, implication),
])


# Entry points
# -----------------------------------------------------------------------------

def parse(text: str, free: Iterable[str] = ()):
    """
    Parse concrete syntax into a normalized NNF formula.

    :param text: formula text
    :type text: str
    :param free: names allowed to stay free
    :type free: Iterable[str]
    :return: the normalized formula
    :raises FormulaSyntaxError: with the failing position
    :raises UnboundVariableError: when a variable is neither bound nor declared free
    """
    try:
        result = Formula.parseString(text, parseAll=True)[0]
    except pp.ParseException as exc:
        raise FormulaSyntaxError(text, exc.loc, str(exc)) from None

    unbound = free_vars(result) - set(free)
    if unbound:
        raise UnboundVariableError(unbound)
    return normalize(result)


def parse_term(text: str):
    try:
        return Term.parseString(text, parseAll=True)[0]
    except pp.ParseException as exc:
        raise FormulaSyntaxError(text, exc.loc, str(exc)) from None
