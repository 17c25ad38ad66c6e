from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Tuple

import pytest

from src.errors import FormulaError, FormulaSyntaxError, ShapeError, UnboundVariableError
from src.logic import (
    Add, And, Eq, Exists, Forall, Lt, Mul, Num, Or, Rel, Succ, Var,
    complexity, diagonal_fixed_point, evaluate, evaluate_window, free_vars, goedel_decode, goedel_encode, is_sigma1,
    negate, pair, parse, seq_decode, seq_encode, sigma1_prenex, skolemize, substitute, theta_test, to_text, unpair,
)
from src.logic.diagonal import fixed_point_instance
from src.logic.evaluate import Evaluator, Verdict
from src.logic.formula import size as node_count
from src.logic.goedel import is_seq
from src.logic.proofs import ProofLine, check_proof, encode_proof, premises


SENTENCES = [
    "forall x. S(x) != 0",
    "forall x. forall y. S(x) = S(y) -> x = y",
    "exists x < 10. x * x = 49",
    "forall x. exists y. x < y and not (y = 0)",
    "exists x. x <= 3 or x >= 7",
    "forall x < 4. exists y < 8. y = x + x",
]


# ---------------------------------------------------------------- parsing


def test_parse_renames_bound_variables_by_depth():
    f = parse("forall y. exists z. y < z")
    assert f == Forall("v0", Exists("v1", Lt(Var("v0"), Var("v1"))))


def test_parse_produces_negation_normal_form():
    f = parse("not (exists x. x = 0 and x < 1)")
    assert f == Forall("v0", Or(Eq(Var("v0"), Num(0), True), Lt(Var("v0"), Num(1), True)))


def test_derived_comparisons():
    assert parse("x <= y", free=["x", "y"]) == Lt(Var("x"), Succ(Var("y")))
    assert parse("x > y", free=["x", "y"]) == Lt(Var("y"), Var("x"))


def test_implication_is_right_associative():
    f = parse("0 = 1 -> 1 = 2 -> 2 = 2")
    assert f == Or(Eq(Num(0), Num(1), True), Or(Eq(Num(1), Num(2), True), Eq(Num(2), Num(2))))


@pytest.mark.parametrize("text", SENTENCES)
def test_printed_formulas_parse_back(text):
    f = parse(text)
    assert parse(to_text(f)) == f


def test_syntax_error_carries_position():
    with pytest.raises(FormulaSyntaxError) as caught:
        parse("forall x. x = ")
    assert caught.value.position >= 0
    assert "Syntax error" in caught.value.headline


def test_unbound_variables_are_reported():
    with pytest.raises(UnboundVariableError) as caught:
        parse("x = y", free=["x"])
    assert caught.value.names == ("y",)


def test_reserved_names_cannot_stay_free():
    with pytest.raises(FormulaError):
        parse("v0 = 0", free=["v0"])


# ---------------------------------------------------------------- formula operations


@pytest.mark.parametrize("text", SENTENCES)
def test_negation_is_an_involution(text):
    f = parse(text)
    assert negate(negate(f)) == f


def test_substitution_avoids_capture():
    f = Exists("y", Lt(Var("x"), Var("y")))
    g = substitute(f, {"x": Var("y")})
    assert free_vars(g) == {"y"}
    assert g.var != "y"
    assert g.body == Lt(Var("y"), Var(g.var))


def test_substitution_leaves_bound_occurrences():
    f = And(Eq(Var("x"), Num(1)), Forall("x", Eq(Var("x"), Var("x"))))
    g = substitute(f, {"x": Num(5)})
    assert g.left == Eq(Num(5), Num(1))
    assert g.right == f.right


def test_buildup_complexity():
    assert complexity(parse("0 = 0")) == 0
    assert complexity(parse("exists x. x = 0")) == 1
    assert complexity(parse("forall x < 3. x = x")) == 2
    assert complexity(parse("0 = 0 and 1 = 1")) == 1
    assert complexity(parse("forall x. exists y. x < y")) == 2


# ---------------------------------------------------------------- Goedel numbering


@pytest.mark.parametrize("text", SENTENCES)
def test_goedel_codes_decode_to_the_same_formula(text):
    f = parse(text)
    assert goedel_decode(goedel_encode(f)) == f


def test_sequence_codes():
    assert seq_encode([]) == 0
    assert seq_encode([0]) == 2
    assert seq_decode(seq_encode([3, 0, 5])) == (3, 0, 5)
    assert not is_seq(1)


def test_pairing():
    assert pair(2, 3) == 27
    assert unpair(27) == (2, 3)
    assert all(unpair(pair(i, j)) == (i, j) for i in range(6) for j in range(6))


# ---------------------------------------------------------------- evaluation


def test_unbounded_existential_is_found_within_fuel():
    f = parse("exists x. x = 3")
    assert evaluate(f, 10).is_true
    assert evaluate(f, 2).is_unknown


def test_unbounded_universal_is_only_settled_by_the_window():
    f = parse("forall x. x = x")
    assert evaluate(f, 10).is_unknown
    assert evaluate_window(f, 10).is_true


def test_bounded_quantifiers_are_exact():
    assert evaluate(parse("forall x < 5. x < 5"), 0).is_true
    assert evaluate(parse("exists x < 5. x = 7"), 0).is_false


@pytest.mark.parametrize("text", SENTENCES)
def test_settled_verdicts_survive_more_fuel(text):
    f = parse(text)
    low = evaluate(f, 8)
    if not low.is_unknown:
        assert evaluate(f, 30).value is low.value


def test_evaluate_rejects_open_formulas_and_unknown_functions():
    with pytest.raises(FormulaError):
        evaluate(parse("x = 0", free=["x"]), 5)
    with pytest.raises(FormulaError):
        evaluate(parse("g(0) = 0"), 5)


# ---------------------------------------------------------------- Skolem matrix


def test_skolem_matrix_of_an_existential():
    psi, table = skolemize(parse("exists y. y = 3"))
    assert free_vars(psi) == {"x"}
    assert len(table.entries) == 1 and not table.entries[0].universal
    assert theta_test([5, 3], psi) is False
    assert theta_test([3, 4], psi) is True
    assert theta_test([], psi) is False


def test_skolemize_expects_a_sentence():
    with pytest.raises(FormulaError):
        skolemize(parse("x = 0", free=["x"]))


# ---------------------------------------------------------------- fixed points and Sigma_1


def test_diagonal_term_evaluates_to_the_fixed_point_code():
    F = parse("0 < z", free=["z"])
    delta = diagonal_fixed_point(F)
    assert Evaluator(5).term(delta.right, {}) == goedel_encode(delta)
    assert evaluate(delta, 5).value is evaluate(fixed_point_instance(F, delta), 5).value is Verdict.TRUE


def test_diagonal_needs_a_distinguished_variable():
    with pytest.raises(FormulaError):
        diagonal_fixed_point(parse("x = y", free=["x", "y"]))


def test_sigma1_shape():
    assert is_sigma1(parse("exists x. forall y < x. y < x"))
    assert not is_sigma1(parse("forall x. x = x"))


def test_sigma1_prenex_pulls_existentials_out():
    f = parse("(exists a. a = y) and (exists b. b = y)", free=["y"])
    g = sigma1_prenex(f)
    assert g == Exists("v0", Exists("v1", And(Eq(Var("v0"), Var("y")), Eq(Var("v1"), Var("y")))))
    assert is_sigma1(g)


def test_sigma1_prenex_rejects_universals():
    with pytest.raises(ShapeError):
        sigma1_prenex(parse("exists x. forall y. x = y"))


# ---------------------------------------------------------------- proof checker


def test_modus_ponens_proof_checks():
    a, b = parse("0 = 1"), parse("1 = 1")
    lines = [ProofLine("premise", a), ProofLine("premise", parse("0 = 1 -> 1 = 1")), ProofLine("mp", b, 0, 1)]
    d = encode_proof(lines)
    assert check_proof(d, goedel_encode(b))
    assert not check_proof(d, goedel_encode(a))
    assert premises(d) == [goedel_encode(a), goedel_encode(parse("0 = 1 -> 1 = 1"))]
    assert evaluate(Rel("Proof", (Num(d), Num(goedel_encode(b)))), 1).is_true


def test_bad_lines_are_rejected():
    assert not check_proof(encode_proof([ProofLine("eq-refl", parse("0 = 1"))]))
    assert check_proof(encode_proof([ProofLine("eq-refl", parse("2 = 2"))]))
    assert not check_proof(0)


# ---------------------------------------------------------------- generated corpora


@dataclass(frozen=True)
class Alphabet:
    """What a generated sentence may use: numerals, S/+/*, numeral bounds, unbounded quantifiers."""
    numerals: Tuple[int, ...]
    arithmetic: bool = False
    bounds: Tuple[int, ...] = ()
    unbounded: bool = False


FULL = Alphabet(numerals=(0, 1), arithmetic=True, bounds=(2,), unbounded=True)
BOUNDED = Alphabet(numerals=(0,), bounds=(2,))
BOUNDED_ARITHMETIC = Alphabet(numerals=(0, 1, 2), arithmetic=True, bounds=(3,))


@lru_cache(maxsize=None)
def terms_of_size(alphabet: Alphabet, size: int, depth: int) -> tuple:
    if size < 1:
        return ()
    if size == 1:
        return tuple(Num(n) for n in alphabet.numerals) + tuple(Var(f"v{i}") for i in range(depth))
    if not alphabet.arithmetic:
        return ()
    found = [Succ(t) for t in terms_of_size(alphabet, size - 1, depth)]
    for left in range(1, size - 1):
        for a in terms_of_size(alphabet, left, depth):
            for b in terms_of_size(alphabet, size - 1 - left, depth):
                found += [Add(a, b), Mul(a, b)]
    return tuple(found)


@lru_cache(maxsize=None)
def formulas_of_size(alphabet: Alphabet, size: int, depth: int) -> tuple:
    """Every NNF formula of exactly ``size`` nodes, its bound variables named by depth."""
    if size < 3:
        return ()
    found = []
    for left in range(1, size - 1):
        for a in terms_of_size(alphabet, left, depth):
            for b in terms_of_size(alphabet, size - 1 - left, depth):
                found += [Eq(a, b), Eq(a, b, True), Lt(a, b), Lt(a, b, True)]
    for left in range(3, size - 3):
        for a in formulas_of_size(alphabet, left, depth):
            for b in formulas_of_size(alphabet, size - 1 - left, depth):
                found += [And(a, b), Or(a, b)]
    var = f"v{depth}"
    if alphabet.unbounded:
        for body in formulas_of_size(alphabet, size - 1, depth + 1):
            found += [Forall(var, body), Exists(var, body)]
    for body in formulas_of_size(alphabet, size - 2, depth + 1):
        for n in alphabet.bounds:
            found += [Forall(var, body, Num(n)), Exists(var, body, Num(n))]
    return tuple(found)


def sentences(alphabet: Alphabet, max_size: int) -> Iterator:
    """Sentences by increasing size."""
    return itertools.chain.from_iterable(formulas_of_size(alphabet, size, 0) for size in range(3, max_size + 1))


def brute_term(t, env) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Succ):
        return brute_term(t.arg, env) + 1
    if isinstance(t, Add):
        return brute_term(t.left, env) + brute_term(t.right, env)
    return brute_term(t.left, env) * brute_term(t.right, env)


def brute(f, env, window: int = 0) -> bool:
    """Direct recursion over the standard model; unbounded quantifiers range below ``window``."""
    if isinstance(f, (Eq, Lt)):
        a, b = brute_term(f.left, env), brute_term(f.right, env)
        return (a == b if isinstance(f, Eq) else a < b) != f.negated
    if isinstance(f, And):
        return brute(f.left, env, window) and brute(f.right, env, window)
    if isinstance(f, Or):
        return brute(f.left, env, window) or brute(f.right, env, window)
    limit = brute_term(f.bound, env) if f.bound is not None else window
    values = [brute(f.body, {**env, f.var: n}, window) for n in range(limit)]
    return all(values) if isinstance(f, Forall) else any(values)


def test_generated_sentences_have_the_requested_size():
    for f in itertools.islice(sentences(FULL, 6), 500):
        assert 3 <= node_count(f) <= 6
        assert not free_vars(f)


def test_ten_thousand_generated_sentences_print_and_parse_back():
    corpus = list(itertools.islice(sentences(FULL, 9), 10_000))
    assert len(corpus) == 10_000
    assert len(set(corpus)) == 10_000
    for f in corpus:
        assert parse(to_text(f)) == f


def test_bounded_sentences_agree_with_direct_recursion():
    # every sentence up to 12 nodes over 0, the bound variables and the bound 2
    count = 0
    for f in sentences(BOUNDED, 12):
        expected = brute(f, {})
        verdict = evaluate(f, 1)
        assert verdict.is_true is expected and verdict.is_false is not expected, to_text(f)
        count += 1
    assert count > 20_000


def test_bounded_arithmetic_sentences_agree_with_direct_recursion():
    for f in sentences(BOUNDED_ARITHMETIC, 6):
        assert evaluate(f, 1).as_bool() is brute(f, {}), to_text(f)


def test_window_evaluation_agrees_with_direct_recursion():
    for f in itertools.islice(sentences(FULL, 6), 3_000):
        assert evaluate_window(f, 3).as_bool() is brute(f, {}, window=3), to_text(f)


def test_goedel_codes_of_the_smallest_formulas_are_distinct():
    smallest = list(itertools.islice(sentences(FULL, 5), 100))
    codes = [goedel_encode(f) for f in smallest]
    assert len(set(codes)) == 100
    assert [goedel_decode(code) for code in codes] == smallest
