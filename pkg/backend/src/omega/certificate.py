"""
Proof certificates read off a well-founded part of the Stammbaum.

A certificate node records the rule applied at a Stammbaum node and a height
below w^2. Forall nodes keep a premise-generator program instead of all their
premises: it maps the numeral n to the path code of the n-th premise, whose
subcertificate is rebuilt on demand. Premises below the window are stored.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from src.errors import CertificateError, FormulaError
from src.logic.evaluate import evaluate_window
from src.logic.formula import Formula, complexity, normalize, to_text
from src.logic.goedel import goedel_decode, goedel_encode, seq_decode
from src.omega.sequent import ChainNode, NodeKind, RuleCase
from src.omega.stammbaum import Stammbaum, premise_generator, stammbaum_for
from src.ordinals import OMEGA, ONE, ZERO, CnfOrdinal, parse_ordinal
from src.orders.program import Expr, evaluate_program, parse_program, program_text
from src.utils.console import log

CERTIFICATE_VERSION = "ordlab.omega-certificate/1"
AXIOM = "axiom"


def height_parts(height: CnfOrdinal) -> Tuple[int, int]:
    """(c, f) with height = w·c + f."""
    c = f = 0
    for exponent, coefficient in height.terms:
        if exponent == ONE:
            c = coefficient
        elif exponent.is_zero():
            f = coefficient
        else:
            raise CertificateError(f"Height {height} is not below w^2")
    return c, f


def limit_height(heights: List[CnfOrdinal]) -> CnfOrdinal:
    """
    Height of a forall node over premises sampled at 0, 1, ..., w-1.

    One more than the largest sampled height while that maximum already shows
    up in the first half of the window; otherwise the premises keep growing and
    the node sits at the next multiple of w.
    """
    if not heights:
        return ONE
    top = max(heights)
    settled = max(heights[:(len(heights) + 1) // 2])
    if settled == top:
        return top + 1
    return OMEGA * (height_parts(top)[0] + 1)


@dataclass
class CertificateNode:
    rule: str
    path: Tuple[int, ...]
    sequent: List[str]
    height: CnfOrdinal
    premises: List["CertificateNode"] = field(default_factory=list)
    generator: Optional[Expr] = None

    def nodes(self) -> Iterator["CertificateNode"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def to_dict(self) -> dict:
        data = {
            "rule": self.rule,
            "path": list(self.path),
            "sequent": self.sequent,
            "height": str(self.height),
            "premises": [premise.to_dict() for premise in self.premises],
        }
        if self.generator is not None:
            data["generator"] = program_text(self.generator)
        return data

    @staticmethod
    def from_dict(data: dict) -> "CertificateNode":
        try:
            return CertificateNode(
                rule=data["rule"],
                path=tuple(data["path"]),
                sequent=list(data["sequent"]),
                height=parse_ordinal(data["height"]),
                premises=[CertificateNode.from_dict(p) for p in data.get("premises", [])],
                generator=parse_program(data["generator"]) if "generator" in data else None,
            )
        except KeyError as e:
            raise CertificateError("Certificate node is missing a field", str(e)) from None


@dataclass
class ProofCertificate:
    """Self-describing certificate of an w-proof of ``psi``."""
    psi: str
    psi_code: int
    complexity: int
    window: int
    root: CertificateNode

    @property
    def bound(self) -> CnfOrdinal:
        """w·(k+1) for the buildup complexity k."""
        return OMEGA * (self.complexity + 1)

    @property
    def height(self) -> CnfOrdinal:
        return self.root.height

    def to_dict(self) -> dict:
        return {
            "version": CERTIFICATE_VERSION,
            "psi": self.psi,
            "psi_code": str(self.psi_code),
            "complexity": self.complexity,
            "window": self.window,
            "root": self.root.to_dict(),
        }

    @staticmethod
    def from_dict(data: dict) -> "ProofCertificate":
        if data.get("version") != CERTIFICATE_VERSION:
            raise CertificateError("Unsupported certificate version", str(data.get("version")))
        return ProofCertificate(
            psi=data["psi"],
            psi_code=int(data["psi_code"]),
            complexity=int(data["complexity"]),
            window=int(data["window"]),
            root=CertificateNode.from_dict(data["root"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def save(self, path: str) -> str:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_json())
        return path

    @staticmethod
    def load(path: str) -> "ProofCertificate":
        with open(path, encoding="utf-8") as handle:
            return ProofCertificate.from_dict(json.load(handle))


class _OutOfBudget(Exception):
    pass


class Prover:
    """
        Builds certificates bottom-up over the Stammbaum. Forall premises are
        proved for the numerals below ``window``; chains longer than ``depth``
        leave the node unproved.
    """

    def __init__(self, tree: Stammbaum, window: int, depth: int = 200, budget: int = 100_000):
        if window < 1:
            raise CertificateError("The premise window must be positive")
        self.tree = tree
        self.window = window
        self.depth = depth
        self.budget = budget
        self.steps = 0

    def certify(self, node: Optional[ChainNode]) -> Optional[CertificateNode]:
        if node is None:
            return None
        try:
            return self._prove(node)
        except _OutOfBudget:
            return None

    def _prove(self, node: ChainNode) -> Optional[CertificateNode]:
        self.steps += 1
        if self.steps > self.budget:
            raise _OutOfBudget()
        sequent = node.sequent.to_list()
        if node.kind is NodeKind.AXIOMATIC:
            return CertificateNode(AXIOM, node.path, sequent, ZERO)
        if node.kind is NodeKind.STUCK or len(node.path) >= self.depth:
            return None
        premises = []
        for premise in self.tree.children(node, self.window):
            proved = self._prove(premise)
            if proved is None:
                return None
            premises.append(proved)
        if node.case is RuleCase.FORALL:
            height = limit_height([p.height for p in premises])
            return CertificateNode(node.case.value, node.path, sequent, height, premises, premise_generator(self.tree, node))
        return CertificateNode(node.case.value, node.path, sequent, max(p.height for p in premises) + 1, premises)


def prove_true(psi: Formula, fuel: int, depth: int = 200, budget: int = 100_000) -> Optional[ProofCertificate]:
    """
    Certificate for a sentence whose window evaluation at ``fuel`` is true.

    Forall premises are proved for the numerals below ``fuel``. Returns None,
    the unknown outcome, when that evaluation is not true or some needed chain does
    not close within ``depth`` steps.

    :raises FormulaError: when psi has free variables
    """
    psi = normalize(psi)
    verdict = evaluate_window(psi, fuel)
    if not verdict.is_true:
        log("warning", "Omega", f"Window verdict is {verdict.value.value} at fuel {fuel}")
        return None
    tree = stammbaum_for(goedel_encode(psi))
    root = Prover(tree, fuel, depth, budget).certify(tree.root)
    if root is None:
        log("warning", "Omega", f"No certificate within depth {depth} at window {fuel}")
        return None
    certificate = ProofCertificate(to_text(psi), tree.code, complexity(psi), fuel, root)
    log("success", "Omega", f"Certificate of height {root.height} below {certificate.bound}")
    return certificate


@dataclass
class ReplayReport:
    nodes: int = 0
    leaves: int = 0
    height_checks: int = 0
    rebuilt: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "height_checks": self.height_checks,
            "rebuilt": self.rebuilt,
            "violations": self.violations,
            "ok": self.ok,
        }


def _premises(item: CertificateNode, prover: Prover, width: int, report: ReplayReport) -> List[CertificateNode]:
    if item.generator is None:
        return item.premises
    stored = {p.path: p for p in item.premises}
    found = []
    for n in range(width):
        path = seq_decode(evaluate_program(item.generator, {"n": n}))
        premise = stored.get(path)
        if premise is None:
            premise = prover.certify(prover.tree.node(path))
            report.rebuilt += 1
        if premise is None:
            report.violations.append(f"premise {n} of {list(item.path)} does not close")
            continue
        found.append(premise)
    return found


def replay(certificate: ProofCertificate, depth: int = 8, width: int = 8) -> ReplayReport:
    """
    Re-derive the certificate from its sentence down to ``depth`` and check it.

    Every node must match the Stammbaum, every leaf must hold a true literal and
    heights must drop from node to premise. Forall nodes are expanded through
    their generator for the numerals below ``width``.
    """
    try:
        psi = goedel_decode(certificate.psi_code)
    except FormulaError as e:
        raise CertificateError("Certificate names no sentence", str(e)) from None
    tree = stammbaum_for(goedel_encode(psi))
    prover = Prover(tree, certificate.window)
    report = ReplayReport()
    if not certificate.height < certificate.bound:
        report.violations.append(f"root height {certificate.height} is not below {certificate.bound}")
    stack = [(certificate.root, 0)]
    while stack:
        item, level = stack.pop()
        report.nodes += 1
        node = tree.node(item.path)
        if node is None or node.sequent.to_list() != item.sequent:
            report.violations.append(f"node {list(item.path)} does not match the Stammbaum")
            continue
        if item.rule == AXIOM:
            if node.kind is NodeKind.AXIOMATIC:
                report.leaves += 1
            else:
                report.violations.append(f"leaf {list(item.path)} is {node.kind.value}")
            continue
        if node.kind is not NodeKind.REDUCIBLE or node.case.value != item.rule:
            report.violations.append(f"node {list(item.path)} applies {item.rule} to a {node.kind.value} sequent")
            continue
        if level >= depth:
            continue
        premises = _premises(item, prover, width, report)
        if item.generator is None and len(premises) != (2 if node.case is RuleCase.AND else 1):
            report.violations.append(f"node {list(item.path)} has {len(premises)} premises")
        for premise in premises:
            report.height_checks += 1
            if not premise.height < item.height:
                report.violations.append(f"height {premise.height} at {list(premise.path)} is not below {item.height}")
            stack.append((premise, level + 1))
    return report
