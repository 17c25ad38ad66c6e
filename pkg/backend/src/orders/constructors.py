"""
Standard presentations and order constructors.

Dyadic codes: 0 is the rational 0 and k >= 1 is (2j + 1) / 2^d with
d = bit_length(k) and j = k - 2^(d - 1), so every code above 0 lies in (0, 1).

The order L' = w·(1+L)+1 lives on the codes 0 (the top element, written INF)
and pair(a, m) + 1, where a = 0 stands for the block -1 and a = l + 1 for the
block of l in L. Blocks compare lexicographically.
"""
from __future__ import annotations

from typing import Optional, Tuple

from src.logic.goedel import is_pair, pair, unpair
from src.orders.finite import FiniteOrder
from src.orders.presentation import OrderPresentation, presentation_from_expr
from src.orders.program import opcode, run

INF = 0


# ---------------------------------------------------------------- dyadic rationals


def dyadic_parts(code: int) -> Tuple[int, int]:
    """(numerator, exponent) with value numerator / 2^exponent."""
    if code == 0:
        return 0, 0
    depth = code.bit_length()
    return 2 * (code - (1 << (depth - 1))) + 1, depth


def dyadic_leq(x: int, y: int) -> bool:
    a, d = dyadic_parts(x)
    b, e = dyadic_parts(y)
    return a << e <= b << d


@opcode("dyadic-le")
def _dyadic_le(args, env, fuel):
    x, y = (run(arg, env, fuel) for arg in args)
    return int(dyadic_leq(x, y))


# ---------------------------------------------------------------- standard presentations


def omega() -> OrderPresentation:
    return OrderPresentation(
        name="omega",
        compare=("<=", "x", "y"),
        successor=("=", "y", ("+", "x", 1)),
        limit=0,
        first=0,
        fs="x",
        predecessor="x",
    )


def empty() -> OrderPresentation:
    return OrderPresentation(name="empty", compare=0, successor=0, limit=0, fs="x", predecessor=0, universe_bound=0)


def one_plus_eta() -> OrderPresentation:
    """All dyadic rationals in [0, 1); 0 is the first element."""
    return OrderPresentation(name="one-plus-eta", compare=("dyadic-le", "x", "y"), successor=0, first=0)


def eta() -> OrderPresentation:
    """Dyadic rationals in (0, 1): dense, without endpoints."""
    return OrderPresentation(
        name="eta",
        compare=("and", ("<", 0, "x"), ("<", 0, "y"), ("dyadic-le", "x", "y")),
        successor=0,
    )


def omega_times(k: int) -> OrderPresentation:
    """w·k on codes x = k·i + b: block b, position i."""
    if k <= 0:
        return empty()

    def block(v):
        return "mod", v, k

    def index(v):
        return "div", v, k

    return OrderPresentation(
        name=f"omega-times-{k}",
        compare=("or", ("<", block("x"), block("y")), ("and", ("=", block("x"), block("y")), ("<=", index("x"), index("y")))),
        successor=("and", ("=", block("x"), block("y")), ("=", index("y"), ("+", index("x"), 1))),
        limit=("and", ("=", index("x"), 0), ("<", 0, block("x"))),
        first=0,
        fs=("+", ("*", "n", k), ("-", block("x"), 1)),
        predecessor=("if", ("=", index("x"), 0), 0, ("+", ("-", "x", k), 1)),
    )


def lift_finite(f: FiniteOrder, name: Optional[str] = None) -> OrderPresentation:
    """Presentation of an explicit finite order; its successor set becomes the successor program."""
    elements = tuple(f.elements)
    successor_codes = tuple(sorted(pair(x, y) for x, y in f.successors))
    predecessors = tuple(sorted((y, x + 1) for x, y in f.successors))
    with_predecessor = {y for _, y in f.successors}
    limits = tuple(x for x in elements[1:] if x not in with_predecessor)
    return OrderPresentation(
        name=name or f"finite-{len(elements)}",
        compare=("and", ("position", "x", elements), ("position", "y", elements),
                 ("<=", ("position", "x", elements), ("position", "y", elements))),
        successor=("one-of", ("pair", "x", "y"), successor_codes),
        limit=("one-of", "x", limits),
        first=elements[0] if elements else None,
        last=elements[-1] if elements else None,
        fs="x",
        predecessor=("lookup", "x", predecessors),
        universe_bound=(max(elements) + 1) if elements else 0,
    )


def finite_chain(size: int) -> OrderPresentation:
    return lift_finite(FiniteOrder.chain(size), name=f"finite-{size}")


# ---------------------------------------------------------------- one element on top


def add_top(p: OrderPresentation) -> OrderPresentation:
    """
    New greatest element. The code 2a stands for a and 1 is the top.
    """
    base = p.to_expr()
    successor = ("add-top-succ", base, "x", "y") if p.successor is not None else None
    first = ("*", 2, p.first) if p.first is not None else (1 if p.universe_bound == 0 else None)
    return OrderPresentation(name=f"top-{p.name}", compare=("add-top-le", base, "x", "y"), successor=successor, first=first, last=1)


@opcode("add-top-le")
def _add_top_le(args, env, fuel):
    base, x, y = args
    p = presentation_from_expr(base)
    x, y = run(x, env, fuel), run(y, env, fuel)
    if x == 1:
        return int(y == 1)
    if x % 2:
        return 0
    if y == 1:
        return int(p.member(x // 2))
    if y % 2:
        return 0
    return int(p.leq(x // 2, y // 2))


@opcode("add-top-succ")
def _add_top_succ(args, env, fuel):
    base, x, y = args
    p = presentation_from_expr(base)
    x, y = run(x, env, fuel), run(y, env, fuel)
    if x % 2 or x == 1:
        return 0
    if y == 1:
        return int(p.last is not None and p.member(x // 2) and p.last_element() == x // 2)
    if y % 2:
        return 0
    return int(p.member(x // 2) and p.member(y // 2) and p.is_successor(x // 2, y // 2))


# ---------------------------------------------------------------- w·(1+L)+1


def lprime_code(block: Optional[int], m: int) -> int:
    """Code of (block, m); ``None`` stands for the block -1."""
    return pair(0 if block is None else block + 1, m) + 1


def lprime_decode(z: int) -> Optional[Tuple[Optional[int], int]]:
    """(block, m) for a pair code, None for INF and for non-codes."""
    if z == INF or not is_pair(z - 1):
        return None
    a, m = unpair(z - 1)
    return (None if a == 0 else a - 1), m


def lprime(p: OrderPresentation) -> OrderPresentation:
    """
    L' = w·(1+L)+1 with successor, limit points, first and last elements,
    predecessors and fundamental sequences.

    The n-th term below INF is (l_n, n), l_n the largest element of L among the
    codes up to n. Below the limit point (l, 0) it is (l'_n, n), l'_n the largest
    element below l among the codes up to n + code(l); the offset keeps the
    immediate neighbour of l in the window from the start.
    """
    base = p.to_expr()
    return OrderPresentation(
        name=f"lprime-{p.name}",
        compare=("lprime-le", base, "x", "y"),
        successor=("lprime-succ", base, "x", "y"),
        limit=("lprime-limit", base, "x"),
        first=lprime_code(None, 0),
        last=INF,
        fs=("lprime-fs", base, "x", "n"),
        predecessor=("lprime-pred", base, "x"),
    )


def _lprime_member(p: OrderPresentation, z: int) -> bool:
    if z == INF:
        return True
    decoded = lprime_decode(z)
    return decoded is not None and (decoded[0] is None or p.member(decoded[0]))


def lprime_leq(p: OrderPresentation, z: int, w: int) -> bool:
    if not (_lprime_member(p, z) and _lprime_member(p, w)):
        return False
    if w == INF:
        return True
    if z == INF:
        return False
    (a, m), (b, k) = lprime_decode(z), lprime_decode(w)
    if a == b:
        return m <= k
    if a is None:
        return True
    if b is None:
        return False
    return p.less(a, b)


def _largest_below(p: OrderPresentation, window: int, ceiling: Optional[int] = None) -> Optional[int]:
    best = None
    for code in range(window + 1):
        if not p.member(code) or (ceiling is not None and not p.less(code, ceiling)):
            continue
        if best is None or p.less(best, code):
            best = code
    return best


def lprime_fs(p: OrderPresentation, z: int, n: int) -> int:
    if z == INF:
        return lprime_code(_largest_below(p, n), n)
    decoded = lprime_decode(z)
    if decoded is None or decoded[0] is None or decoded[1] != 0:
        return z
    block = decoded[0]
    return lprime_code(_largest_below(p, n + block, ceiling=block), n)


@opcode("lprime-le")
def _lprime_le(args, env, fuel):
    base, x, y = args
    return int(lprime_leq(presentation_from_expr(base), run(x, env, fuel), run(y, env, fuel)))


@opcode("lprime-succ")
def _lprime_succ(args, env, fuel):
    base, x, y = args
    p = presentation_from_expr(base)
    z, w = run(x, env, fuel), run(y, env, fuel)
    if not (_lprime_member(p, z) and _lprime_member(p, w)) or INF in (z, w):
        return 0
    (a, m), (b, k) = lprime_decode(z), lprime_decode(w)
    return int(a == b and k == m + 1)


@opcode("lprime-limit")
def _lprime_limit(args, env, fuel):
    base, x = args
    p = presentation_from_expr(base)
    z = run(x, env, fuel)
    if z == INF:
        return 1
    if not _lprime_member(p, z):
        return 0
    block, m = lprime_decode(z)
    return int(block is not None and m == 0)


@opcode("lprime-fs")
def _lprime_fs(args, env, fuel):
    base, x, n = args
    return lprime_fs(presentation_from_expr(base), run(x, env, fuel), run(n, env, fuel))


@opcode("lprime-pred")
def _lprime_pred(args, env, fuel):
    base, x = args
    p = presentation_from_expr(base)
    z = run(x, env, fuel)
    if z == INF or not _lprime_member(p, z):
        return 0
    block, m = lprime_decode(z)
    return lprime_code(block, m - 1) + 1 if m else 0
