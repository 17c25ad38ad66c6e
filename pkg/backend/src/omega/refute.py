"""Refutation paths: deduction chains along which every formula is false."""
from __future__ import annotations

from itertools import islice
from typing import Iterator, List, Optional, Tuple

from src.errors import RefutationAborted
from src.logic.evaluate import evaluate_window
from src.logic.formula import Formula, instantiate, normalize, to_text
from src.logic.goedel import goedel_encode, seq_encode
from src.omega.sequent import ChainNode, NodeKind, RuleCase, Sequent, reduct
from src.omega.stammbaum import Stammbaum, stammbaum_for
from src.orders.presentation import OrderPresentation
from src.utils.trace import TraceWriter


def _false(f: Formula, fuel: int) -> bool:
    return evaluate_window(f, fuel).is_false


def _choice(node: ChainNode, fuel: int) -> int:
    """Child index that keeps the chain false: a false conjunct, a falsifying numeral, otherwise 0."""
    chi = reduct(node.redex_formula)
    if node.case is RuleCase.AND:
        return 0 if _false(chi.left, fuel) else 1
    if node.case is RuleCase.FORALL:
        for m in range(fuel):
            if _false(instantiate(chi, m), fuel):
                return m
        raise RefutationAborted("No falsifying numeral in the window", f"{to_text(chi)} below {fuel}")
    return 0


def refutation_nodes(psi: Formula, fuel: int, trace: Optional[TraceWriter] = None) -> Iterator[ChainNode]:
    """
    Lazy path through the Stammbaum of a false sentence, ending at a stuck leaf or running forever.

    Every emitted sequent is checked: each of its formulas must evaluate false at ``fuel``.

    :raises RefutationAborted: when the sentence or an emitted formula does not evaluate false
    """
    psi = normalize(psi)
    if not _false(psi, fuel):
        raise RefutationAborted("The sentence does not evaluate false", f"{to_text(psi)} at fuel {fuel}")
    tree: Stammbaum = stammbaum_for(goedel_encode(psi))
    node = tree.root
    while True:
        not_false = [f for f in node.sequent if not _false(f, fuel)]
        if not_false or node.kind is NodeKind.AXIOMATIC:
            raise RefutationAborted(f"Sequent at {list(node.path)} is not all false", str(node.sequent))
        if trace is not None:
            trace.emit(len(node.path), "refute", path=list(node.path), sequent=node.sequent.to_list())
        yield node
        if node.kind is NodeKind.STUCK:
            return
        node = tree.node(node.path + (_choice(node, fuel),))


def refute_false(psi: Formula, fuel: int, trace: Optional[TraceWriter] = None) -> Iterator[Sequent]:
    """The sequents of ``refutation_nodes``."""
    return (node.sequent for node in refutation_nodes(psi, fuel, trace))


def refutation_path(psi: Formula, fuel: int, steps: int) -> Tuple[int, ...]:
    """Child indices of the first ``steps`` steps, shorter when the path ends at a stuck leaf."""
    nodes = list(islice(refutation_nodes(psi, fuel), steps + 1))
    return nodes[-1].path


def stammbaum_descending_chain(p: OrderPresentation, psi: Formula, fuel: int, length: int = 10) -> List[int]:
    """
    Node codes along the refutation path after the root; each lies below the previous one in ``p``.

    :raises RefutationAborted: when the path ends before ``length`` nodes
    """
    path = refutation_path(psi, fuel, length)
    if len(path) < length:
        raise RefutationAborted(f"Refutation path ends after {len(path)} steps", to_text(normalize(psi)))
    codes = [seq_encode(path[:k]) for k in range(1, length + 1)]
    for upper, lower in zip(codes, codes[1:]):
        if not p.less(lower, upper):
            raise RefutationAborted("Path node is not below its parent", f"{lower} vs {upper}")
    return codes
