"""
Ordinal notations in the style of Kleene's O, and the map g from structured orders into them.

    2^a        successor of a
    3·5^e      limit of the notations {e}(0), {e}(1), ... of registry program e
    otherwise  denotes 0; the base 1 = 2^0 therefore denotes 1

g sends an element x of an order with successor, limit, first, last and
fundamental-sequence components to a notation denoting the order type of the
segment up to and including x: the first element goes to the base, the
successor of y to 2^g(y), and a limit point x to the successor of 3·5^e, where
e is registered as n -> g(fs(x, n)).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import List, Optional

from src.errors import ProgramError, ProgressionError, RegistryError
from src.logic.evaluate import HostUnknown, host_function, host_relation
from src.logic.goedel import is_seq, seq_decode
from src.ordinals import CnfOrdinal, ZERO, add, omega_pow
from src.orders.constructors import INF, lprime
from src.orders.presentation import OrderPresentation, presentation_from_expr
from src.orders.program import Fuel, opcode, run
from src.progressions.registry import ProgramRegistry, RegistryEntry, default_registry, entry_kind
from src.utils.console import log

VALUE_BITS = 4096
STRUCTURE = ("successor", "limit", "first", "last", "fs")


# ---------------------------------------------------------------- arithmetic shape


def is_pow2(a: int) -> bool:
    return a >= 1 and a & (a - 1) == 0


def log2(a: int) -> int:
    return max(a.bit_length() - 1, 0)


def is_lim(a: int) -> bool:
    if a < 3 or a % 3:
        return False
    rest = a // 3
    while rest % 5 == 0:
        rest //= 5
    return rest == 1


def limidx(a: int) -> int:
    """e for a = 3·5^e, 0 otherwise."""
    if not is_lim(a):
        return 0
    rest, e = a // 3, 0
    while rest > 1:
        rest //= 5
        e += 1
    return e


@dataclass(frozen=True)
class NotationTerm:
    """
        A notation kept by shape, since 2^2^... outgrows any representation quickly.

        ``shape`` is successor, limit or other; ``pred`` is the notation below a
        successor, ``e`` the registry index of a limit, ``number`` the value of an other.
    """
    shape: str
    pred: Optional["NotationTerm"] = None
    e: int = 0
    number: int = 0

    @staticmethod
    def other(number: int) -> "NotationTerm":
        return NotationTerm("other", number=number)

    @staticmethod
    def successor(pred: "NotationTerm") -> "NotationTerm":
        return NotationTerm("successor", pred=pred)

    @staticmethod
    def limit(e: int) -> "NotationTerm":
        return NotationTerm("limit", e=e)

    @staticmethod
    def base() -> "NotationTerm":
        return NotationTerm.successor(NotationTerm.other(0))

    @staticmethod
    def parse(a: int) -> "NotationTerm":
        if a < 0:
            raise ProgressionError(f"Negative notation {a}")
        chain = 0
        while is_pow2(a):
            a = log2(a)
            chain += 1
        term = NotationTerm.limit(limidx(a)) if is_lim(a) else NotationTerm.other(a)
        for _ in range(chain):
            term = NotationTerm.successor(term)
        return term

    @property
    def value(self) -> Optional[int]:
        """The natural number a, or None once it has more than VALUE_BITS bits."""
        if self.shape == "other":
            return self.number
        if self.shape == "limit":
            return 3 * 5 ** self.e
        below = self.pred.value
        if below is None or below > VALUE_BITS:
            return None
        return 2 ** below

    def __str__(self):
        if self.shape == "other":
            return str(self.number)
        if self.shape == "limit":
            return f"3*5^{self.e}"
        return f"2^({self.pred})"

    def to_dict(self) -> dict:
        value = self.value
        return {"shape": self.shape, "term": str(self), "decimal": None if value is None else str(value)}


# ---------------------------------------------------------------- host primitives


def walk(a: int, s: int, registry: Optional[ProgramRegistry] = None) -> int:
    """
    Follow the notation a downwards along the steps coded by the sequence s.

    A successor steps to its predecessor, a limit 3·5^e steps to {e}(n) with n the
    current entry of s. The result is the node reached plus one, or 0 when a step
    starts from a notation of the third kind.
    """
    if not is_seq(s):
        return 0
    registry = default_registry() if registry is None else registry
    for n in seq_decode(s):
        if is_pow2(a):
            a = log2(a)
        elif is_lim(a):
            a = registry.call(limidx(a), n)
        else:
            return 0
    return a + 1


@host_relation("IsPow2")
def _is_pow2_host(_, a):
    return is_pow2(a)


@host_relation("IsLim")
def _is_lim_host(_, a):
    return is_lim(a)


@host_function("log2")
def _log2_host(_, a):
    return log2(a)


@host_function("limidx")
def _limidx_host(_, a):
    return limidx(a)


@host_function("walk")
def _walk_host(_, a, s):
    try:
        return walk(a, s)
    except (ProgramError, RegistryError) as exc:
        raise HostUnknown(exc.headline) from None


# ---------------------------------------------------------------- g


@opcode("presentation-fs")
def _presentation_fs(args, env, fuel):
    base, x, n = args
    return presentation_from_expr(base).fundamental(run(x, env, fuel), run(n, env, fuel))


@entry_kind("g-map")
def _g_map_entry(entry: RegistryEntry, n: int, budget: int) -> int:
    value = registry_term(entry, n).value
    if value is None:
        raise RegistryError(f"Notation {{{entry.index}}}({n}) is too large to write out")
    return value


_terms_lock = threading.RLock()


def check_structure(p: OrderPresentation):
    """
    :raises ProgressionError: when a structural component is missing
    """
    missing = [component for component in STRUCTURE if not p.has(component)]
    if missing:
        raise ProgressionError(f"Presentation <{p.name}> is missing structural components", ", ".join(missing))


def notation_map_g(p: OrderPresentation, x: int, registry: Optional[ProgramRegistry] = None,
                   search_bound: int = 256) -> NotationTerm:
    """
    Notation g(x) whose ordinal is the type of the segment of p up to x.

    :raises ProgressionError: when a component is missing, or x is neither the first
        element, a successor nor a limit point
    """
    check_structure(p)
    registry = default_registry() if registry is None else registry
    text = p.to_text()
    with _terms_lock:
        cached = registry.memo.get(("g", text, x))
        if cached is not None:
            return cached
        if not p.member(x):
            raise ProgressionError(f"{x} is not an element of <{p.name}>")

        first = p.first_element()
        chain: List[int] = []
        y = x
        while True:
            known = registry.memo.get(("g", text, y))
            if known is not None:
                term = known
                break
            if y == first:
                term = NotationTerm.base()
                break
            if p.is_limit(y):
                e = registry.register(("presentation-fs", p.to_expr(), y, "n"), kind="g-map")
                term = NotationTerm.successor(NotationTerm.limit(e))
                break
            below = p.predecessor_of(y, search_bound)
            if below is None:
                raise ProgressionError(f"{y} is neither first, a successor nor a limit point of <{p.name}>")
            chain.append(y)
            y = below
        registry.memo[("g", text, y)] = term
        for z in reversed(chain):
            term = NotationTerm.successor(term)
            registry.memo[("g", text, z)] = term
        return term


def registry_term(entry: RegistryEntry, n: int, registry: Optional[ProgramRegistry] = None,
                  budget: int = 200_000) -> NotationTerm:
    """{e}(n) as a notation; g-map entries stay symbolic."""
    if entry.kind == "g-map":
        base = presentation_from_expr(entry.program[1])
        return notation_map_g(base, run(entry.program, {"n": n}, Fuel(budget)), registry)
    registry = default_registry() if registry is None else registry
    return NotationTerm.parse(registry.call(entry.index, n, budget))


# ---------------------------------------------------------------- |a|


def cnf_supremum(values: List[CnfOrdinal]) -> Optional[CnfOrdinal]:
    """
    Supremum of an increasing run recognized from its second half.

    Every consecutive pair must first differ at the same exponent k with equal
    terms above it; the supremum is then that common part plus w^(k+1).
    """
    tail = values[len(values) // 2:]
    if len(tail) < 2:
        return None
    level, above = None, None
    for low, high in zip(tail, tail[1:]):
        if not low < high:
            return None
        low_terms, high_terms = dict(low.terms), dict(high.terms)
        differing = [k for k in set(low_terms) | set(high_terms) if low_terms.get(k, 0) != high_terms.get(k, 0)]
        k = max(differing)
        common = tuple((exponent, c) for exponent, c in high.terms if k < exponent)
        if level is None:
            level, above = k, common
        elif level != k or above != common:
            return None
    return add(CnfOrdinal(above), omega_pow(level.succ()))


def notation_ordinal(a: NotationTerm, depth: int, registry: Optional[ProgramRegistry] = None) -> Optional[CnfOrdinal]:
    """
    |a| in Cantor normal form, or None when a limit's values fit no recognized pattern.

    :raises RegistryError: when a limit index is not registered
    """
    registry = default_registry() if registry is None else registry
    chain = 0
    while a.shape == "successor":
        chain += 1
        a = a.pred
    if a.shape == "other":
        below = ZERO
    else:
        key = ("ordinal", a, depth)
        with _terms_lock:
            if key not in registry.memo:
                entry = registry.entry(a.e)
                values = []
                for n in range(depth):
                    value = notation_ordinal(registry_term(entry, n, registry), depth, registry)
                    if value is None:
                        break
                    values.append(value)
                registry.memo[key] = cnf_supremum(values) if len(values) == depth else None
                if registry.memo[key] is None:
                    log("debug", "Notation", f"No supremum pattern for {a} at depth {depth}")
            below = registry.memo[key]
        if below is None:
            return None
    return add(below, CnfOrdinal.from_int(chain)) if chain else below


def order_notation(p: OrderPresentation, depth: int = 8, registry: Optional[ProgramRegistry] = None):
    """g(INF) over w·(1+p)+1 and its ordinal."""
    term = notation_map_g(lprime(p), INF, registry)
    return term, notation_ordinal(term, depth, registry)
