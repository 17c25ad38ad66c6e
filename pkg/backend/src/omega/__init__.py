"""Proof search in w-logic: deduction chains, the Stammbaum, certificates and refutations."""

from .sequent import ChainNode, NodeKind, RuleCase, Sequent, classify
from .stammbaum import Children, Stammbaum, extend, stammbaum_for, stammbaum_kb
from .certificate import CertificateNode, ProofCertificate, ReplayReport, prove_true, replay
from .refute import refutation_path, refute_false, stammbaum_descending_chain

__all__ = [
    "ChainNode", "NodeKind", "RuleCase", "Sequent", "classify",
    "Children", "Stammbaum", "extend", "stammbaum_for", "stammbaum_kb",
    "CertificateNode", "ProofCertificate", "ReplayReport", "prove_true", "replay",
    "refutation_path", "refute_false", "stammbaum_descending_chain",
]
