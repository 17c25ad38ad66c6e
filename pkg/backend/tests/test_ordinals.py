from __future__ import annotations

import itertools

import numpy as np
import pytest

from src.errors import NotLimitError, OrdinalError
from src.ordinals import OMEGA, ONE, ZERO, CnfOrdinal, add, compare, fundamental_sequence, mul, omega_pow, parse_ordinal, to_text


def test_text_form_parses_back():
    for text in ("0", "7", "w", "w·2 + 1", "w^2 + w·3", "w^w + 1", "w^(w + 1)·2"):
        assert to_text(parse_ordinal(text)) == text


def test_alternative_spellings():
    assert parse_ordinal("w*2+1") == parse_ordinal("ω·2 + 1")
    assert parse_ordinal(4) == CnfOrdinal.from_int(4)
    with pytest.raises(OrdinalError):
        parse_ordinal("w +")


def test_addition_absorbs_smaller_left_terms():
    assert add(ONE, OMEGA) == OMEGA
    assert add(OMEGA, ONE) > OMEGA
    assert 3 + OMEGA == OMEGA
    assert OMEGA + OMEGA == OMEGA * 2


def test_multiplication():
    assert mul(CnfOrdinal.from_int(2), OMEGA) == OMEGA
    assert OMEGA * OMEGA == omega_pow(CnfOrdinal.from_int(2))
    assert mul(parse_ordinal("w + 1"), CnfOrdinal.from_int(2)) == parse_ordinal("w·2 + 1")


def test_comparison_is_the_standard_order():
    chain = [ZERO, ONE, CnfOrdinal.from_int(5), OMEGA, parse_ordinal("w + 1"), parse_ordinal("w·2"),
             parse_ordinal("w^2"), parse_ordinal("w^w")]
    assert all(compare(a, b) == -1 for a, b in zip(chain, chain[1:]))
    assert sorted(reversed(chain)) == chain


def test_equal_ordinals_hash_alike():
    assert len({parse_ordinal("w + 1"), OMEGA + 1, OMEGA.succ()}) == 1


def test_shape_predicates():
    a = parse_ordinal("w·2 + 1")
    assert a.is_successor() and not a.is_limit()
    assert parse_ordinal("w^2").is_limit()
    assert CnfOrdinal.from_int(3).natural_value() == 3
    assert a.as_power_terms() == [ONE, ONE, ZERO]
    with pytest.raises(OrdinalError):
        OMEGA.natural_value()


def test_fundamental_sequences():
    assert fundamental_sequence(OMEGA, 3) == 3
    assert fundamental_sequence(parse_ordinal("w^2"), 2) == parse_ordinal("w·2")
    assert fundamental_sequence(parse_ordinal("w^w"), 3) == parse_ordinal("w^3")
    assert fundamental_sequence(parse_ordinal("w·2"), 4) == parse_ordinal("w + 4")
    values = [fundamental_sequence(parse_ordinal("w^2"), n) for n in range(5)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_successors_have_no_fundamental_sequence():
    with pytest.raises(NotLimitError):
        fundamental_sequence(CnfOrdinal.from_int(5), 1)
    with pytest.raises(NotLimitError):
        fundamental_sequence(ZERO, 1)


def test_malformed_terms_are_rejected():
    with pytest.raises(OrdinalError):
        CnfOrdinal(((ZERO, 1), (ONE, 1)))
    with pytest.raises(OrdinalError):
        CnfOrdinal(((ONE, 0),))


# ---------------------------------------------------------------- generated laws


EXPONENTS = [ZERO, ONE, CnfOrdinal.from_int(2), OMEGA, OMEGA + 1]


def generated_ordinals():
    """Every CNF ordinal with at most three terms over EXPONENTS and coefficients 1 or 2."""
    found = [ZERO]
    for count in (1, 2, 3):
        for exponents in itertools.combinations(reversed(EXPONENTS), count):
            for coefficients in itertools.product((1, 2), repeat=count):
                found.append(CnfOrdinal(tuple(zip(exponents, coefficients))))
    return found


ORDINALS = generated_ordinals()


@pytest.fixture(scope="module")
def triples():
    rng = np.random.default_rng(2024)
    picks = rng.integers(0, len(ORDINALS), size=(10_000, 3))
    return [(ORDINALS[i], ORDINALS[j], ORDINALS[k]) for i, j, k in picks]


def test_generated_ordinals_are_distinct():
    assert len(ORDINALS) == 131
    assert len(set(ORDINALS)) == 131
    assert len(list(itertools.product(ORDINALS, repeat=2))) >= 10_000


def test_compare_is_a_total_order_on_every_pair():
    for a, b in itertools.product(ORDINALS, repeat=2):
        sign = compare(a, b)
        assert sign in (-1, 0, 1)
        assert compare(b, a) == -sign
        assert (sign == 0) == (a.terms == b.terms)
        assert [a < b, a == b, b < a].count(True) == 1


def test_compare_is_transitive(triples):
    for a, b, c in triples:
        if compare(a, b) <= 0 and compare(b, c) <= 0:
            assert compare(a, c) <= 0


def test_addition_is_associative(triples):
    for a, b, c in triples:
        assert add(add(a, b), c) == add(a, add(b, c))


def test_addition_is_strictly_monotone_on_the_right(triples):
    for a, b, c in triples:
        if b < c:
            assert add(a, b) < add(a, c)
        assert not add(a, b) < b


def test_multiplication_distributes_from_the_left(triples):
    for a, b, c in triples:
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


def test_multiplication_is_associative(triples):
    for a, b, c in triples[:2_000]:
        assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_sorting_leaves_no_descending_pair():
    rng = np.random.default_rng(7)
    expected = sorted(ORDINALS)
    assert all(compare(a, b) < 0 for a, b in zip(expected, expected[1:]))
    for _ in range(20):
        shuffled = list(ORDINALS)
        rng.shuffle(shuffled)
        assert sorted(shuffled) == expected
