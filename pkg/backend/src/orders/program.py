"""
Closed s-expression programs over the naturals.

Values are natural numbers; booleans are 0 and 1. Core opcodes:

    + - * div mod               arithmetic, ``-`` truncated, division by 0 gives 0
    = < <=  and or not  if      comparisons and case analysis
    let V E BODY                local binding
    pair left right is-pair     the pairing <i, j> = (i + j)^2 + i
    exists-below V N BODY       bounded search, also forall-below and min-below
    seq-len seq-at is-seq       sequence codes shared with formula codes
    in-set X S                  bit X of the Ackermann code S
    one-of X (C ...)            membership in a literal list
    position X (C ...)          index in a literal list plus one, 0 when absent
    lookup X ((K V) ...)        V of the first matching key, 0 when absent
    call E N                    registry program E applied to N

Domain opcodes (orders, trees, stage machines) register through ``@opcode`` in
the modules listed in ``_EXTENSIONS`` and receive their arguments unevaluated.
"""
from __future__ import annotations

import importlib
from typing import Callable, Dict, Mapping, Tuple, Union

import pyparsing as pp

from src.errors import FuelExhaustedError, ProgramError, ProgramSyntaxError, UnknownOpcodeError
from src.logic.goedel import is_pair, is_seq, pair, seq_at, seq_len, unpair

Expr = Union[int, str, Tuple["Expr", ...]]
Handler = Callable[[Tuple[Expr, ...], Mapping[str, int], "Fuel"], int]

OPCODES: Dict[str, Handler] = {}
"""
Opcode table. Handlers get the raw argument expressions, the environment and the fuel meter.
"""

_EXTENSIONS = (
    "src.orders.constructors",
    "src.orders.trees",
    "src.omega.stammbaum",
    "src.lab.stages",
    "src.lab.approx",
    "src.lab.jump_omega",
    "src.lab.jump_copy",
    "src.lab.ash_knight",
    "src.progressions.registry",
)
_loaded = False


class Fuel:
    """Step meter; every evaluated node costs one unit."""

    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def spend(self, amount: int = 1):
        self.used += amount
        if self.used > self.budget:
            raise FuelExhaustedError(self.budget)

    @property
    def left(self) -> int:
        return max(0, self.budget - self.used)


def opcode(name: str):
    def decorator(handler: Handler) -> Handler:
        OPCODES[name] = handler
        return handler

    return decorator


def _resolve(name: str) -> Handler:
    global _loaded
    if name not in OPCODES and not _loaded:
        _loaded = True
        for module in _EXTENSIONS:
            importlib.import_module(module)
    if name not in OPCODES:
        raise UnknownOpcodeError(name)
    return OPCODES[name]


# ---------------------------------------------------------------- text


_Atom = pp.Regex(r"[^()\s]+")
_Program = pp.Forward()
_Program <<= _Atom | pp.Group(pp.Suppress("(") + pp.ZeroOrMore(_Program) + pp.Suppress(")"))


def _convert(node) -> Expr:
    if isinstance(node, str):
        return int(node) if node.isdigit() else node
    return tuple(_convert(child) for child in node)


def parse_program(text: str) -> Expr:
    try:
        parsed = _Program.parseString(text, parseAll=True)[0]
    except pp.ParseException as exc:
        raise ProgramSyntaxError(f"Cannot parse program at position {exc.loc}", text[:80]) from None
    return _convert(parsed)


def program_text(expr: Expr) -> str:
    """Canonical text: single spaces, decimal numerals."""
    if isinstance(expr, bool):
        return str(int(expr))
    if isinstance(expr, int):
        if expr < 0:
            raise ProgramError(f"Negative literal {expr}")
        return str(expr)
    if isinstance(expr, str):
        return expr
    return "(" + " ".join(program_text(child) for child in expr) + ")"


def program_code(expr: Expr) -> int:
    """Goedel number of a program: the big-endian integer of its canonical text."""
    return int.from_bytes(program_text(expr).encode("utf-8"), "big")


def program_from_code(code: int) -> Expr:
    raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
    try:
        return parse_program(raw.decode("utf-8"))
    except UnicodeDecodeError:
        raise ProgramSyntaxError(f"Program code {code} is not UTF-8") from None


def substitute(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace free symbols; binders of the core language are respected."""
    if isinstance(expr, str):
        return mapping.get(expr, expr)
    if isinstance(expr, int) or not expr:
        return expr
    head = expr[0]
    if head in ("let",) and len(expr) == 4:
        inner = {k: v for k, v in mapping.items() if k != expr[1]}
        return (head, expr[1], substitute(expr[2], mapping), substitute(expr[3], inner))
    if head in ("exists-below", "forall-below", "min-below") and len(expr) == 4:
        inner = {k: v for k, v in mapping.items() if k != expr[1]}
        return (head, expr[1], substitute(expr[2], mapping), substitute(expr[3], inner))
    return (head,) + tuple(substitute(child, mapping) for child in expr[1:])


# ---------------------------------------------------------------- evaluation


def run(expr: Expr, env: Mapping[str, int], fuel: Fuel) -> int:
    fuel.spend()
    if isinstance(expr, bool):
        return int(expr)
    if isinstance(expr, int):
        return expr
    if isinstance(expr, str):
        if expr not in env:
            raise ProgramError(f"Unbound symbol <{expr}>")
        return env[expr]
    if not expr or not isinstance(expr[0], str):
        raise ProgramError(f"Malformed application {program_text(expr)[:60]}")
    return _resolve(expr[0])(expr[1:], env, fuel)


def evaluate_program(expr: Expr, env: Mapping[str, int] = None, budget: int = 200_000) -> int:
    """
    Run a program to a natural number.

    :raises FuelExhaustedError: when more than ``budget`` nodes are evaluated
    """
    return run(expr, dict(env or {}), Fuel(budget))


def truthy(expr: Expr, env, fuel: Fuel) -> bool:
    return run(expr, env, fuel) != 0


def _arity(args, count: int, name: str):
    if len(args) != count:
        raise ProgramError(f"<{name}> expects {count} arguments, got {len(args)}")


def _binary(name: str, fn: Callable[[int, int], int]):
    def handler(args, env, fuel):
        _arity(args, 2, name)
        return fn(run(args[0], env, fuel), run(args[1], env, fuel))

    OPCODES[name] = handler


_binary("+", lambda a, b: a + b)
_binary("-", lambda a, b: max(0, a - b))
_binary("*", lambda a, b: a * b)
_binary("div", lambda a, b: a // b if b else 0)
_binary("mod", lambda a, b: a % b if b else 0)
_binary("=", lambda a, b: int(a == b))
_binary("<", lambda a, b: int(a < b))
_binary("<=", lambda a, b: int(a <= b))
_binary("pair", pair)
_binary("seq-at", seq_at)
_binary("in-set", lambda x, s: (s >> x) & 1)


@opcode("left")
def _left(args, env, fuel):
    _arity(args, 1, "left")
    return unpair(run(args[0], env, fuel))[0]


@opcode("right")
def _right(args, env, fuel):
    _arity(args, 1, "right")
    return unpair(run(args[0], env, fuel))[1]


@opcode("is-pair")
def _is_pair(args, env, fuel):
    _arity(args, 1, "is-pair")
    return int(is_pair(run(args[0], env, fuel)))


@opcode("seq-len")
def _seq_len(args, env, fuel):
    _arity(args, 1, "seq-len")
    return seq_len(run(args[0], env, fuel))


@opcode("is-seq")
def _is_seq(args, env, fuel):
    _arity(args, 1, "is-seq")
    return int(is_seq(run(args[0], env, fuel)))


@opcode("and")
def _and(args, env, fuel):
    return int(all(truthy(arg, env, fuel) for arg in args))


@opcode("or")
def _or(args, env, fuel):
    return int(any(truthy(arg, env, fuel) for arg in args))


@opcode("not")
def _not(args, env, fuel):
    _arity(args, 1, "not")
    return int(not truthy(args[0], env, fuel))


@opcode("if")
def _if(args, env, fuel):
    _arity(args, 3, "if")
    return run(args[1] if truthy(args[0], env, fuel) else args[2], env, fuel)


@opcode("let")
def _let(args, env, fuel):
    _arity(args, 3, "let")
    scope = dict(env)
    scope[args[0]] = run(args[1], env, fuel)
    return run(args[2], scope, fuel)


def _bounded(name: str, found: Callable[[int, int], int], exhausted: Callable[[int], int], stop_on: bool):
    def handler(args, env, fuel):
        _arity(args, 3, name)
        var, bound, body = args
        limit = run(bound, env, fuel)
        scope = dict(env)
        for value in range(limit):
            scope[var] = value
            if truthy(body, scope, fuel) == stop_on:
                return found(value, limit)
        return exhausted(limit)

    OPCODES[name] = handler


_bounded("exists-below", lambda v, n: 1, lambda n: 0, True)
_bounded("forall-below", lambda v, n: 0, lambda n: 1, False)
_bounded("min-below", lambda v, n: v, lambda n: n, True)


@opcode("one-of")
def _one_of(args, env, fuel):
    _arity(args, 2, "one-of")
    value = run(args[0], env, fuel)
    choices = args[1] if isinstance(args[1], tuple) else (args[1],)
    return int(value in choices)


@opcode("position")
def _position(args, env, fuel):
    _arity(args, 2, "position")
    value = run(args[0], env, fuel)
    choices = args[1] if isinstance(args[1], tuple) else (args[1],)
    return choices.index(value) + 1 if value in choices else 0


@opcode("lookup")
def _lookup(args, env, fuel):
    _arity(args, 2, "lookup")
    value = run(args[0], env, fuel)
    for entry in args[1]:
        if entry[0] == value:
            return entry[1]
    return 0


def call_with(expr: Expr, fuel: Fuel, **env) -> int:
    """Run a nested program argument with a fresh environment."""
    return run(expr, env, fuel)
