"""Trees of finite sequences and their Kleene-Brouwer orders."""
from __future__ import annotations

import importlib
from functools import cmp_to_key, lru_cache
from itertools import product
from typing import Callable, Dict, Iterator, List, Sequence, Tuple, Union

from src.errors import OrderError, ProgramError
from src.logic.goedel import goedel_decode, is_seq, seq_decode, seq_encode
from src.logic.skolem import theta_test
from src.orders.presentation import OrderPresentation
from src.orders.program import Expr, opcode, program_text, run

Node = Tuple[int, ...]
Membership = Callable[[Tuple[Expr, ...], Node], bool]

TREE_KINDS: Dict[str, Membership] = {}
"""
Tree programs by head symbol. ``(finite-tree (c ...))`` lists sequence codes,
``(bounded-tree W D)`` holds every sequence with entries below W and length at
most D, ``(skolem-alive P)`` is the tree of the Skolem matrix with code P.
"""

_EXTENSIONS = ("src.omega.stammbaum",)
_loaded = False


def tree_kind(name: str):
    def decorator(fn: Membership) -> Membership:
        TREE_KINDS[name] = fn
        return fn

    return decorator


def _resolve(name: str) -> Membership:
    global _loaded
    if name not in TREE_KINDS and not _loaded:
        _loaded = True
        for module in _EXTENSIONS:
            importlib.import_module(module)
    if name not in TREE_KINDS:
        raise ProgramError(f"Unknown tree program <{name}>")
    return TREE_KINDS[name]


def tree_member(program: Expr, node: Node) -> bool:
    if not isinstance(program, tuple) or not program:
        raise ProgramError(f"Not a tree program: {program_text(program)[:60]}")
    return _resolve(program[0])(program[1:], tuple(node))


@tree_kind("finite-tree")
def _finite(args, node):
    codes = args[0] if args and isinstance(args[0], tuple) else args
    return seq_encode(node) in codes


@tree_kind("bounded-tree")
def _bounded(args, node):
    width, depth = args
    return len(node) <= depth and all(entry < width for entry in node)


@lru_cache(maxsize=65536)
def _alive(psi_code: int, node: Node) -> bool:
    psi = goedel_decode(psi_code)
    return not any(theta_test((x,) + node, psi) for x in range(len(node)))


@tree_kind("skolem-alive")
def _skolem_alive(args, node):
    """t survives when no candidate x < len(t) already refutes psi(f, x) on the values t."""
    return _alive(args[0], node)


class SequenceTree:
    """
        A decidable set of finite sequences, closed under prefixes.

        Membership is delegated to a serializable tree program so that the tree
        can be embedded in order presentations.
    """

    def __init__(self, program: Expr):
        self.program = program

    def __repr__(self):
        return f"SequenceTree({program_text(self.program)[:60]})"

    @staticmethod
    def finite(nodes: Sequence[Sequence[int]]) -> "SequenceTree":
        return SequenceTree(("finite-tree", tuple(sorted(seq_encode(tuple(n)) for n in nodes))))

    @staticmethod
    def bounded(width: int, depth: int) -> "SequenceTree":
        return SequenceTree(("bounded-tree", width, depth))

    def contains(self, node: Union[int, Sequence[int]]) -> bool:
        if isinstance(node, int):
            if not is_seq(node):
                return False
            node = seq_decode(node)
        return tree_member(self.program, tuple(node))

    def children(self, node: Sequence[int], width: int) -> List[Node]:
        return [tuple(node) + (i,) for i in range(width) if self.contains(tuple(node) + (i,))]

    def nodes(self, width: int, depth: int) -> Iterator[Node]:
        """Members with entries below ``width`` and length at most ``depth``, depth first."""
        if not self.contains(()):
            return
        stack: List[Node] = [()]
        while stack:
            node = stack.pop()
            yield node
            if len(node) < depth:
                stack.extend(reversed(self.children(node, width)))

    def prefix_closed(self, width: int, depth: int) -> bool:
        """Brute-force closure check over every sequence below the bounds."""
        for length in range(depth + 1):
            for node in product(range(width), repeat=length):
                if self.contains(node) and not all(self.contains(node[:k]) for k in range(length)):
                    return False
        return True


def kb_leq(s: Node, t: Node) -> bool:
    """s <= t in the Kleene-Brouwer order: s extends t, or s is left of t at the first difference."""
    for a, b in zip(s, t):
        if a != b:
            return a < b
    return len(s) >= len(t)


@opcode("kb-le")
def _kb_le(args, env, fuel):
    tree, x, y = args
    x, y = run(x, env, fuel), run(y, env, fuel)
    if not (is_seq(x) and is_seq(y)):
        return 0
    s, t = seq_decode(x), seq_decode(y)
    fuel.spend(len(s) + len(t))
    if not (tree_member(tree, s) and tree_member(tree, t)):
        return 0
    return int(kb_leq(s, t))


def kleene_brouwer(t: SequenceTree, name: str = "kleene-brouwer") -> OrderPresentation:
    """Presentation on sequence codes: each node lies above its descendants, subtrees ordered by child index."""
    if not isinstance(t.program, tuple):
        raise OrderError("Tree program must be an s-expression")
    return OrderPresentation(name=name, compare=("kb-le", t.program, "x", "y"))


def kb_sorted(nodes) -> List[Node]:
    """Nodes in increasing Kleene-Brouwer order."""
    return sorted(nodes, key=cmp_to_key(lambda s, t: 0 if s == t else (-1 if kb_leq(s, t) else 1)))
