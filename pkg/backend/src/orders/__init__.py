"""Computable linear orders: presentations, finite orders, trees and constructors."""

from .program import Fuel, evaluate_program, opcode, parse_program, program_text
from .finite import FiniteOrder, PrefixEvidence
from .presentation import OrderPresentation, explore_prefix, presentation_from_text
from .trees import SequenceTree, kb_leq, kleene_brouwer
from .constructors import (
    INF, add_top, dyadic_leq, empty, eta, finite_chain, lift_finite, lprime, lprime_code, lprime_decode,
    omega, omega_times, one_plus_eta,
)
from .embedding import embed_check, recursion_violations
from .templates import parse_template, prefix_iso_check

__all__ = [
    "Fuel", "evaluate_program", "opcode", "parse_program", "program_text",
    "FiniteOrder", "PrefixEvidence",
    "OrderPresentation", "explore_prefix", "presentation_from_text",
    "SequenceTree", "kb_leq", "kleene_brouwer",
    "INF", "add_top", "dyadic_leq", "empty", "eta", "finite_chain", "lift_finite", "lprime", "lprime_code",
    "lprime_decode", "omega", "omega_times", "one_plus_eta",
    "embed_check", "recursion_violations",
    "parse_template", "prefix_iso_check",
]
