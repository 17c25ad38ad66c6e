"""First-order arithmetic: syntax, coding, bounded evaluation, Skolemization and fixed points."""

from .formula import (
    Add, And, Apply, Eq, Exists, Forall, Lt, Mul, Num, Or, Rel, Succ, Var,
    complexity, free_vars, is_literal, negate, normalize, substitute, to_text,
)
from .grammar import parse, parse_term
from .goedel import goedel_decode, goedel_encode, pair, seq_decode, seq_encode, unpair
from .evaluate import TruthVerdict, Verdict, evaluate, evaluate_window
from .skolem import SkolemTable, skolemize, theta_test
from .diagonal import diagonal_fixed_point, is_sigma1, sigma1_prenex

__all__ = [
    "Add", "And", "Apply", "Eq", "Exists", "Forall", "Lt", "Mul", "Num", "Or", "Rel", "Succ", "Var",
    "complexity", "free_vars", "is_literal", "negate", "normalize", "substitute", "to_text",
    "parse", "parse_term",
    "goedel_decode", "goedel_encode", "pair", "seq_decode", "seq_encode", "unpair",
    "TruthVerdict", "Verdict", "evaluate", "evaluate_window",
    "SkolemTable", "skolemize", "theta_test",
    "diagonal_fixed_point", "is_sigma1", "sigma1_prenex",
]
