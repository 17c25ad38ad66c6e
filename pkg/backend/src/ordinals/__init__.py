"""Cantor normal form ordinals below epsilon_0."""

from .cnf import (
    CnfOrdinal, OMEGA, ONE, ZERO,
    add, compare, fundamental_sequence, mul, omega_pow, parse_ordinal, to_text,
)

__all__ = [
    "CnfOrdinal", "OMEGA", "ONE", "ZERO",
    "add", "compare", "fundamental_sequence", "mul", "omega_pow", "parse_ordinal", "to_text",
]
