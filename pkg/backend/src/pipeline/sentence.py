"""
Sentence to tree to Kleene-Brouwer order.

The tree of a sentence phi is read off the Skolem matrix psi(f, x) of not-phi:
a sequence t of values f(0), f(1), ... stays in the tree while no candidate
x < len(t) makes psi false. An infinite branch is a Skolem function for not-phi,
so phi is true exactly when the tree is well-founded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from src.errors import ChainError, FormulaError
from src.logic.formula import Formula, free_vars, negate, to_text
from src.logic.goedel import goedel_encode, seq_decode, seq_encode
from src.logic.skolem import SkolemTable, skolemize
from src.orders.presentation import OrderPresentation
from src.orders.trees import SequenceTree, kleene_brouwer
from src.utils.console import log
from src.utils.trace import TraceWriter


class SentenceTree(SequenceTree):
    """Tree of the Skolem matrix of a negated sentence."""

    def __init__(self, phi: Formula, psi: Formula, table: SkolemTable):
        self.phi = phi
        self.psi = psi
        self.table = table
        super().__init__(("skolem-alive", goedel_encode(psi)))


def sentence_to_tree(phi: Formula) -> SentenceTree:
    """
    :raises FormulaError: when phi has free variables
    """
    if free_vars(phi):
        raise FormulaError("sentence_to_tree expects a sentence", ", ".join(sorted(free_vars(phi))))
    psi, table = skolemize(negate(phi))
    return SentenceTree(phi, psi, table)


def sentence_to_order(phi: Formula) -> OrderPresentation:
    tree = sentence_to_tree(phi)
    return kleene_brouwer(tree, name="kb-sentence")


def explore_tree(tree: SequenceTree, width: int, depth: int, trace: Optional[TraceWriter] = None) -> List[Tuple[int, ...]]:
    """Members with entries below ``width`` up to length ``depth``; every visit is traced."""
    nodes = []
    for node in tree.nodes(width, depth):
        nodes.append(node)
        if trace is not None:
            trace.emit(len(node), "node", code=seq_encode(node), values=list(node))
    return nodes


def _survives(tree: SequenceTree, node: Tuple[int, ...], width: int, lookahead: int) -> bool:
    if lookahead == 0:
        return True
    return any(_survives(tree, child, width, lookahead - 1) for child in tree.children(node, width))


def find_branch(tree: SequenceTree, depth: int, width: int = 8, lookahead: int = 2) -> Optional[Tuple[int, ...]]:
    """
    Greedy descent: the least child that still has descendants ``lookahead`` levels further down.

    Returns a member of length ``depth`` or None when the descent gets stuck.
    """
    if not tree.contains(()):
        return None
    node: Tuple[int, ...] = ()
    while len(node) < depth:
        for child in tree.children(node, width):
            if _survives(tree, child, width, min(lookahead, depth - len(child))):
                node = child
                break
        else:
            return None
    return node


def descending_chain(p: OrderPresentation, branch: Sequence[int]) -> List[int]:
    """
    Codes of the prefixes of length 1, 2, ..., len(branch): each one lies strictly below the previous one.

    :raises ChainError: when the presentation does not confirm a step
    """
    codes = [seq_encode(tuple(branch[:k])) for k in range(1, len(branch) + 1)]
    for upper, lower in zip(codes, codes[1:]):
        if not p.less(lower, upper):
            raise ChainError("Branch prefix is not below its parent", f"{seq_decode(lower)} vs {seq_decode(upper)}")
    return codes


@dataclass
class NoExtensionCertificate:
    """No member of length ``depth`` with entries below ``width``; ``nodes`` lists every member checked."""
    depth: int
    width: int
    holds: bool
    nodes: List[Tuple[int, ...]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": "no-extension",
            "depth": self.depth,
            "width": self.width,
            "holds": self.holds,
            "nodes": [list(node) for node in self.nodes],
        }


def no_extension_certificate(tree: SequenceTree, depth: int, width: int, trace: Optional[TraceWriter] = None) -> NoExtensionCertificate:
    """Depth-first scan; stops at the first member of length ``depth``."""
    certificate = NoExtensionCertificate(depth, width, True)
    for node in tree.nodes(width, depth):
        certificate.nodes.append(node)
        if trace is not None:
            trace.emit(len(node), "node", code=seq_encode(node), values=list(node))
        if len(node) == depth:
            certificate.holds = False
            break
    return certificate


@dataclass
class PipelineReport:
    """Outcome of running a sentence through the pipeline at desk scale."""
    phi: str
    presentation: OrderPresentation
    certificate: Optional[NoExtensionCertificate] = None
    branch: Optional[Tuple[int, ...]] = None
    chain: List[int] = field(default_factory=list)

    @property
    def well_founded_evidence(self) -> bool:
        return self.certificate is not None and self.certificate.holds

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "presentation": self.presentation.to_text(),
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "branch": list(self.branch) if self.branch is not None else None,
            "chain": self.chain,
        }


def run_pipeline(phi: Formula, depth: int = 6, width: int = 6, chain_length: int = 10, trace: Optional[TraceWriter] = None) -> PipelineReport:
    """
    Certificate of no extension at ``depth`` when one exists, otherwise a descending chain of ``chain_length``.
    """
    tree = sentence_to_tree(phi)
    presentation = kleene_brouwer(tree, name="kb-sentence")
    report = PipelineReport(to_text(phi), presentation)
    certificate = no_extension_certificate(tree, depth, width, trace)
    if certificate.holds:
        report.certificate = certificate
        log("success", "Pipeline", f"No member of length {depth} with entries below {width}")
        return report
    branch = find_branch(tree, chain_length, width)
    if branch is None:
        report.certificate = certificate
        log("warning", "Pipeline", f"Members survive at depth {depth} but no branch of length {chain_length} was found")
        return report
    report.branch = branch
    report.chain = descending_chain(presentation, branch)
    log("info", "Pipeline", f"Descending chain of length {len(report.chain)} along {branch}")
    return report
