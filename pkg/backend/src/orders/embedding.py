"""
Executable embedding predicate for initial segments.

For a <= b the relation [a, b) -> alpha below w^n is read by recursion on n:

    n = 0       alpha is 0 and a = b
    n + 1       alpha = w^m1 + ... + w^mk and there are a = c0 <= ... <= ck = b such
                that for every i < k and every d in [ci, c(i+1)) some beta < w^mi
                has [ci, d) -> beta at level n

The segment L|a is [z, a) with z the first element. Quantifiers over elements
range over an explored prefix; the existential over beta ranges over the CNF
terms below w^mi whose coefficients do not exceed the prefix size.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, List, Optional, Tuple

from src.errors import FuelExhaustedError, OrderError
from src.logic.evaluate import TruthVerdict, Verdict
from src.ordinals import CnfOrdinal, compare, omega_pow
from src.orders.finite import FiniteOrder
from src.orders.presentation import OrderPresentation, explore_prefix


def level_of(alpha: CnfOrdinal) -> int:
    """Least n with alpha < w^n."""
    if alpha.is_zero():
        return 0
    lead = alpha.leading_exponent
    if not lead.is_natural():
        raise OrderError(f"{alpha} is not below w^w")
    return lead.natural_value() + 1


def ordinals_below(alpha: CnfOrdinal, width: int) -> List[CnfOrdinal]:
    """CNF terms beta < alpha < w^w with every coefficient at most ``width``, in increasing order."""
    if alpha.is_zero():
        return []
    top = level_of(alpha)
    found = []
    for coefficients in product(range(width + 1), repeat=top):
        terms = tuple((CnfOrdinal.from_int(top - 1 - i), c) for i, c in enumerate(coefficients) if c)
        beta = CnfOrdinal(terms)
        if compare(beta, alpha) < 0:
            found.append(beta)
    return sorted(found)


class SegmentEmbedder:
    """
        Memoized recursion over one finite order. Positions stand for elements,
        so [i, j) is the interval between the i-th and the j-th element.
    """

    def __init__(self, order: FiniteOrder, width: Optional[int] = None):
        self.order = order
        self.width = len(order) if width is None else width
        self.embeds = lru_cache(maxsize=None)(self._embeds)
        self._block = lru_cache(maxsize=None)(self._block_ok)

    def _embeds(self, i: int, j: int, alpha: CnfOrdinal, n: int) -> bool:
        if compare(alpha, omega_pow(CnfOrdinal.from_int(n))) >= 0:
            return False
        if n == 0:
            return i == j
        exponents = alpha.as_power_terms()
        # positions reachable as c_t after t blocks
        reachable = {i}
        for exponent in exponents:
            m = exponent.natural_value()
            reachable = {c2 for c in reachable for c2 in range(c, j + 1) if self._block(c, c2, m, n)}
            if not reachable:
                return False
        return j in reachable

    def _block_ok(self, c: int, c2: int, m: int, n: int) -> bool:
        candidates = ordinals_below(omega_pow(CnfOrdinal.from_int(m)), self.width)
        return all(
            any(self.embeds(c, d, beta, n - 1) for beta in reversed(candidates))
            for d in range(c, c2)
        )

    def initial_segment(self, a: int, alpha: CnfOrdinal, n: int) -> bool:
        """L|a -> alpha at level n."""
        return self.embeds(0, self.order.position[a], alpha, n)


def embed_check(p: OrderPresentation, a: int, alpha: CnfOrdinal, search_bound: int, n: Optional[int] = None) -> TruthVerdict:
    """
    Decide L|a -> alpha on the prefix of codes below ``search_bound``.

    The verdict is exact when the universe of ``p`` lies below the bound and
    holds for the explored prefix otherwise; it is unknown when ``a`` is not
    explored or a comparison runs out of fuel.

    :raises OrderError: when alpha is not below w^n
    """
    level = level_of(alpha) if n is None else n
    if compare(alpha, omega_pow(CnfOrdinal.from_int(level))) >= 0:
        raise OrderError(f"{alpha} is not below w^{level}")
    try:
        prefix = explore_prefix(p, search_bound)
    except FuelExhaustedError:
        return TruthVerdict(Verdict.UNKNOWN, search_bound)
    if a not in prefix:
        return TruthVerdict(Verdict.UNKNOWN, search_bound)
    value = SegmentEmbedder(prefix).initial_segment(a, alpha, level)
    return TruthVerdict(Verdict.of(value), search_bound)


def recursion_violations(p: OrderPresentation, search_bound: int, alphas: Iterable[CnfOrdinal], n: int = 2) -> List[Tuple[int, CnfOrdinal]]:
    """
    Pairs (a, alpha) on which L|a -> alpha differs from (for all b < a)(some beta < alpha) L|b -> beta.

    Both sides are evaluated on the same explored prefix.
    """
    prefix = explore_prefix(p, search_bound)
    embedder = SegmentEmbedder(prefix)
    violations = []
    for alpha in alphas:
        below = ordinals_below(alpha, len(prefix))
        for a in prefix:
            left = embedder.initial_segment(a, alpha, n)
            right = all(any(embedder.initial_segment(b, beta, n) for beta in below) for b in prefix.below(a))
            if left != right:
                violations.append((a, alpha))
    return violations

