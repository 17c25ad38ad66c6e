"""
Goedel numbering of formulas and finite sequences.

A sequence (a_0, ..., a_{k-1}) is coded by writing the Elias-gamma code of every
a_i + 1, concatenating the bit strings into b and returning int("1" + b, 2) - 1.
The empty sequence is 0. Every syntax node is the sequence [tag, *fields]:

    tag  node      fields
    0    Num       value
    1    Var       name
    2    Succ      arg
    3    Add       left, right
    4    Mul       left, right
    5    Apply     name, *args
    6    Eq        negated, left, right
    7    Lt        negated, left, right
    8    Rel       negated, name, *args
    9    And       left, right
    10   Or        left, right
    11   Exists    var, has_bound, [bound], body
    12   Forall    var, has_bound, [bound], body

Names are coded as the big-endian integer of their UTF-8 bytes.
"""
from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import List, Sequence, Tuple

from src.errors import GoedelDecodeError
from src.logic.formula import (
    Add,
    And,
    Apply,
    Eq,
    Exists,
    Forall,
    Lt,
    Mul,
    Num,
    Or,
    Rel,
    Succ,
    Var,
)

TAGS = {Num: 0, Var: 1, Succ: 2, Add: 3, Mul: 4, Apply: 5, Eq: 6, Lt: 7, Rel: 8, And: 9, Or: 10, Exists: 11, Forall: 12}


# ---------------------------------------------------------------- sequences


def _gamma(value: int) -> str:
    binary = bin(value)[2:]
    return "0" * (len(binary) - 1) + binary


def seq_encode(values: Sequence[int]) -> int:
    bits = []
    for value in values:
        if value < 0:
            raise ValueError(f"Sequence entries must be natural numbers, got {value}")
        bits.append(_gamma(value + 1))
    return int("1" + "".join(bits), 2) - 1


@lru_cache(maxsize=65536)
def _seq_decode(code: int) -> Tuple[int, ...]:
    if code < 0:
        raise GoedelDecodeError(code, "negative number")
    bits = bin(code + 1)[3:]
    values: List[int] = []
    index = 0
    while index < len(bits):
        zeros = 0
        while index < len(bits) and bits[index] == "0":
            zeros += 1
            index += 1
        if index + zeros + 1 > len(bits):
            raise GoedelDecodeError(code, "truncated gamma code")
        values.append(int(bits[index:index + zeros + 1], 2) - 1)
        index += zeros + 1
    return tuple(values)


def seq_decode(code: int) -> Tuple[int, ...]:
    return _seq_decode(code)


def is_seq(code: int) -> bool:
    try:
        _seq_decode(code)
    except GoedelDecodeError:
        return False
    return True


def seq_len(code: int) -> int:
    return len(_seq_decode(code)) if is_seq(code) else 0


def seq_at(code: int, index: int) -> int:
    if not is_seq(code):
        return 0
    values = _seq_decode(code)
    return values[index] if 0 <= index < len(values) else 0


def name_code(name: str) -> int:
    return int.from_bytes(name.encode("utf-8"), "big")


def name_decode(code: int) -> str:
    if code <= 0:
        raise GoedelDecodeError(code, "empty name")
    try:
        return code.to_bytes((code.bit_length() + 7) // 8, "big").decode("utf-8")
    except UnicodeDecodeError:
        raise GoedelDecodeError(code, "name is not UTF-8") from None


# ---------------------------------------------------------------- formulas


def goedel_encode(node) -> int:
    """Code of a term or formula."""
    tag = TAGS.get(type(node))
    if tag is None:
        raise TypeError(f"Cannot encode {node!r}")
    if isinstance(node, Num):
        fields = [node.value]
    elif isinstance(node, Var):
        fields = [name_code(node.name)]
    elif isinstance(node, Succ):
        fields = [goedel_encode(node.arg)]
    elif isinstance(node, (Add, Mul, And, Or)):
        fields = [goedel_encode(node.left), goedel_encode(node.right)]
    elif isinstance(node, Apply):
        fields = [name_code(node.fn)] + [goedel_encode(a) for a in node.args]
    elif isinstance(node, (Eq, Lt)):
        fields = [int(node.negated), goedel_encode(node.left), goedel_encode(node.right)]
    elif isinstance(node, Rel):
        fields = [int(node.negated), name_code(node.name)] + [goedel_encode(a) for a in node.args]
    else:
        fields = [name_code(node.var), int(node.bound is not None)]
        if node.bound is not None:
            fields.append(goedel_encode(node.bound))
        fields.append(goedel_encode(node.body))
    return seq_encode([tag] + fields)


TERM_TAGS = frozenset((0, 1, 2, 3, 4, 5))


def _decode(code: int, want_term: bool):
    values = seq_decode(code)
    if not values:
        raise GoedelDecodeError(code, "empty node")
    tag, fields = values[0], values[1:]
    if want_term != (tag in TERM_TAGS):
        raise GoedelDecodeError(code, f"tag {tag} in the wrong position")

    def arity(expected: int):
        if len(fields) != expected:
            raise GoedelDecodeError(code, f"tag {tag} expects {expected} fields, got {len(fields)}")

    def flag(value: int) -> bool:
        if value not in (0, 1):
            raise GoedelDecodeError(code, f"flag must be 0 or 1, got {value}")
        return bool(value)

    if tag == 0:
        arity(1)
        return Num(fields[0])
    if tag == 1:
        arity(1)
        return Var(name_decode(fields[0]))
    if tag == 2:
        arity(1)
        return Succ(_decode(fields[0], True))
    if tag in (3, 4):
        arity(2)
        node = Add if tag == 3 else Mul
        return node(_decode(fields[0], True), _decode(fields[1], True))
    if tag == 5:
        if not fields:
            raise GoedelDecodeError(code, "function without a name")
        return Apply(name_decode(fields[0]), tuple(_decode(a, True) for a in fields[1:]))
    if tag in (6, 7):
        arity(3)
        node = Eq if tag == 6 else Lt
        return node(_decode(fields[1], True), _decode(fields[2], True), flag(fields[0]))
    if tag == 8:
        if len(fields) < 2:
            raise GoedelDecodeError(code, "relation without a name")
        return Rel(name_decode(fields[1]), tuple(_decode(a, True) for a in fields[2:]), flag(fields[0]))
    if tag in (9, 10):
        arity(2)
        node = And if tag == 9 else Or
        return node(_decode(fields[0], False), _decode(fields[1], False))
    if tag in (11, 12):
        node = Exists if tag == 11 else Forall
        if len(fields) < 3:
            raise GoedelDecodeError(code, "quantifier too short")
        var = name_decode(fields[0])
        if flag(fields[1]):
            arity(4)
            return node(var, _decode(fields[3], False), _decode(fields[2], True))
        arity(3)
        return node(var, _decode(fields[2], False))
    raise GoedelDecodeError(code, f"unknown tag {tag}")


def goedel_decode(code: int):
    """Formula with the given code. Raises GoedelDecodeError on non-codes."""
    return _decode(code, False)


def term_decode(code: int):
    return _decode(code, True)


def is_formula_code(code: int) -> bool:
    try:
        goedel_decode(code)
    except (GoedelDecodeError, RecursionError):
        return False
    return True


# ---------------------------------------------------------------- pairing


def pair(i: int, j: int) -> int:
    """<i, j> = (i + j)^2 + i."""
    return (i + j) * (i + j) + i


def unpair(z: int) -> Tuple[int, int]:
    """Inverse of ``pair``; numbers outside its range decode to (0, 0)."""
    s = isqrt(z)
    i = z - s * s
    if i > s:
        return 0, 0
    return i, s - i


def is_pair(z: int) -> bool:
    s = isqrt(z)
    return z - s * s <= s


def tuple_encode(values: Sequence[int]) -> int:
    """Right-nested pairs; () is 0 and (a,) is a."""
    if not values:
        return 0
    result = values[-1]
    for value in reversed(values[:-1]):
        result = pair(value, result)
    return result
