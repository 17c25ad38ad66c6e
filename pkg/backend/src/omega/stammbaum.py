"""
Lazy Stammbaum of a sentence: the tree of its deduction chains.

A reducible node with redex chi has children by the case of chi:

    or        one child, chi replaced by both disjuncts
    and       two children, chi replaced by the left or the right conjunct
    exists    one child, chi replaced by its least instance not met on the
              chain so far, chi itself appended at the end
    forall    one child per numeral m, chi replaced by its m-th instance

Nodes are addressed by the child indices taken from the root, so the tree is a
set of finite sequences and carries a Kleene-Brouwer order.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from src.errors import ChainError, FormulaError
from src.logic.formula import Formula, free_vars, instantiate, normalize, to_text
from src.logic.goedel import goedel_decode, goedel_encode, is_seq, seq_decode, seq_encode
from src.omega.sequent import ChainNode, NodeKind, RuleCase, Sequent, classify, reduct
from src.orders.presentation import OrderPresentation
from src.orders.program import opcode, run
from src.orders.trees import SequenceTree, kleene_brouwer, tree_kind

Path = Tuple[int, ...]


def _first_fresh_instance(chi: Formula, seen) -> Tuple[int, Formula]:
    m = 0
    while True:
        instance = instantiate(chi, m)
        if instance not in seen:
            return m, instance
        m += 1


def child(node: ChainNode, index: int) -> ChainNode:
    """
    :raises ChainError: on a leaf, or on an index the case does not offer
    """
    if node.kind is not NodeKind.REDUCIBLE:
        raise ChainError(f"Cannot extend a {node.kind.value} node", str(node.sequent))
    if index < 0 or (node.case is RuleCase.AND and index > 1) or (node.case in (RuleCase.OR, RuleCase.EXISTS) and index):
        raise ChainError(f"No child {index} under a {node.case.value} redex", str(node.sequent))
    position, sequent = node.redex, node.sequent
    chi = reduct(sequent[position])
    if node.case is RuleCase.OR:
        reduced = sequent.splice(position, chi.left, chi.right)
    elif node.case is RuleCase.AND:
        reduced = sequent.splice(position, chi.right if index else chi.left)
    elif node.case is RuleCase.EXISTS:
        _, instance = _first_fresh_instance(chi, node.seen)
        reduced = sequent.splice(position, instance, tail=(sequent[position],))
    else:
        reduced = sequent.splice(position, instantiate(chi, index))
    return classify(reduced, node.path + (index,), node.seen)


class Children:
    """Children of a reducible node; forall nodes have one per numeral and are generated on demand."""

    def __init__(self, node: ChainNode):
        self.node = node

    @property
    def count(self) -> Optional[int]:
        """2 for and, 1 for or and exists, None when there is one child per numeral."""
        if self.node.case is RuleCase.FORALL:
            return None
        return 2 if self.node.case is RuleCase.AND else 1

    def __getitem__(self, index: int) -> ChainNode:
        return child(self.node, index)

    def __iter__(self) -> Iterator[ChainNode]:
        index = 0
        while self.count is None or index < self.count:
            yield child(self.node, index)
            index += 1

    def take(self, width: int) -> List[ChainNode]:
        limit = width if self.count is None else min(width, self.count)
        return [child(self.node, index) for index in range(limit)]


def extend(node: ChainNode) -> Children:
    """
    :raises ChainError: on an axiomatic or stuck node
    """
    if node.kind is not NodeKind.REDUCIBLE:
        raise ChainError(f"Cannot extend a {node.kind.value} node", str(node.sequent))
    return Children(node)


class Stammbaum:
    """Deduction chains of one sentence, materialized on demand and memoized by path."""

    def __init__(self, psi: Formula):
        if free_vars(psi):
            raise FormulaError("The Stammbaum is built for sentences", ", ".join(sorted(free_vars(psi))))
        self.psi = normalize(psi)
        self.code = goedel_encode(self.psi)
        self.root = classify(Sequent.of(self.psi))
        self._nodes: Dict[Path, Optional[ChainNode]] = {(): self.root}

    def __repr__(self):
        return f"Stammbaum({to_text(self.psi)})"

    @property
    def program(self):
        return "stammbaum", self.code

    def node(self, address: Union[int, Sequence[int]]) -> Optional[ChainNode]:
        """Node at a path or a path code, replaying child indices from the root; None outside the tree."""
        if isinstance(address, int):
            if not is_seq(address):
                return None
            address = seq_decode(address)
        path = tuple(address)
        if path in self._nodes:
            return self._nodes[path]
        parent = self.node(path[:-1])
        found = None
        if parent is not None and parent.kind is NodeKind.REDUCIBLE:
            count = Children(parent).count
            if count is None or path[-1] < count:
                found = child(parent, path[-1])
        self._nodes[path] = found
        return found

    def contains(self, path: Sequence[int]) -> bool:
        return self.node(path) is not None

    def children(self, node: ChainNode, width: int) -> List[ChainNode]:
        if node.is_leaf:
            return []
        found = extend(node).take(width)
        for item in found:
            self._nodes.setdefault(item.path, item)
        return found

    def walk(self, width: int, depth: int) -> Iterator[ChainNode]:
        """Depth-first, forall children below ``width``, paths of length at most ``depth``."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if len(node.path) < depth:
                stack.extend(reversed(self.children(node, width)))

    def chain(self, path: Sequence[int]) -> List[Sequent]:
        """The deduction chain ending at ``path``."""
        path = tuple(path)
        if not self.contains(path):
            raise ChainError("Path leaves the Stammbaum", str(list(path)))
        return [self.node(path[:k]).sequent for k in range(len(path) + 1)]

    def sequence_tree(self) -> SequenceTree:
        return SequenceTree(self.program)


@lru_cache(maxsize=64)
def stammbaum_for(psi_code: int) -> Stammbaum:
    return Stammbaum(goedel_decode(psi_code))


@tree_kind("stammbaum")
def _stammbaum_member(args, node):
    """``(stammbaum P)``: the Stammbaum of the sentence with code P."""
    return stammbaum_for(args[0]).contains(node)


@opcode("stammbaum-child")
def _stammbaum_child(args, env, fuel):
    """``(stammbaum-child P NODE n)``: code of the n-th child of the node with path code NODE."""
    _, node_code, n = (run(arg, env, fuel) for arg in args)
    return seq_encode(seq_decode(node_code) + (n,))


def premise_generator(tree: Stammbaum, node: ChainNode):
    """Program mapping the numeral ``n`` to the path code of the n-th premise of a forall node."""
    return "stammbaum-child", tree.code, node.code, "n"


def stammbaum_kb(psi: Formula) -> OrderPresentation:
    tree = stammbaum_for(goedel_encode(normalize(psi)))
    return kleene_brouwer(tree.sequence_tree(), name="kb-stammbaum")
