from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from src.errors import FuelExhaustedError, LinearityError, OrderError, ProgramError, ProgramSyntaxError, TemplateError, UnknownOpcodeError
from src.logic import And, Eq, Num, Or, Rel, evaluate, evaluate_window
from src.logic.goedel import pair, seq_encode
from src.ordinals import OMEGA, ONE, CnfOrdinal
from src.orders import (
    INF, FiniteOrder, OrderPresentation, PrefixEvidence, SequenceTree, embed_check, empty, eta, evaluate_program,
    explore_prefix, finite_chain, kb_leq, kleene_brouwer, lprime, omega, omega_times, one_plus_eta, parse_program,
    parse_template, prefix_iso_check, presentation_from_text, program_text, recursion_violations,
)
from src.orders.program import program_code, program_from_code
from src.orders.templates import template_names
from src.orders.trees import kb_sorted


# ---------------------------------------------------------------- programs


@pytest.mark.parametrize("text, value", [
    ("(+ 2 (* 3 4))", 14),
    ("(- 2 5)", 0),
    ("(div 7 0)", 0),
    ("(mod 7 3)", 1),
    ("(exists-below v 10 (= (* v v) 49))", 1),
    ("(forall-below v 10 (< v 9))", 0),
    ("(min-below v 10 (< 5 v))", 6),
    ("(lookup 3 ((1 10) (3 30)))", 30),
    ("(position 7 (5 7 9))", 2),
    ("(one-of 4 (5 7 9))", 0),
    ("(let a 4 (pair a 1))", 29),
    ("(if (<= 3 2) 10 20)", 20),
])
def test_core_opcodes(text, value):
    assert evaluate_program(parse_program(text)) == value


def test_environment_and_canonical_text():
    assert evaluate_program(("+", "x", 1), {"x": 4}) == 5
    assert program_text(parse_program("( +  1   2 )")) == "(+ 1 2)"
    expr = parse_program("(and (< 0 x) (dyadic-le x y))")
    assert program_from_code(program_code(expr)) == expr


def test_program_errors():
    with pytest.raises(FuelExhaustedError):
        evaluate_program(parse_program("(forall-below v 1000 (= v v))"), budget=50)
    with pytest.raises(ProgramError):
        evaluate_program(parse_program("(+ x 1)"))
    with pytest.raises(UnknownOpcodeError):
        evaluate_program(parse_program("(frobnicate 1)"))
    with pytest.raises(ProgramSyntaxError):
        parse_program("(+ 1")


# ---------------------------------------------------------------- finite orders


def test_from_relation_sorts_the_universe():
    order = FiniteOrder.from_relation([3, 1, 2], lambda x, y: x <= y)
    assert order.elements == (1, 2, 3)
    assert order.below(3) == (1, 2)
    assert order.between(1, 3) == (2,)
    assert np.array_equal(order.relation_matrix(), np.triu(np.ones((3, 3), dtype=bool)))


@pytest.mark.parametrize("leq", [
    lambda x, y: x == y,
    lambda x, y: True,
    lambda x, y: x < y,
])
def test_non_linear_relations_are_rejected(leq):
    with pytest.raises(LinearityError):
        FiniteOrder.from_relation([1, 2], leq)


def test_successor_pairs_must_be_adjacent():
    with pytest.raises(LinearityError):
        FiniteOrder([0, 1, 2], [(0, 2)])


def test_export_lists_the_whole_relation():
    assert FiniteOrder.chain(2).export() == "0 <= 0\n0 <= 1\n1 <= 1\n"
    assert FiniteOrder.parse_export(FiniteOrder([4, 2, 9]).export()).elements == (4, 2, 9)
    assert FiniteOrder().export() == ""


def test_restrict_and_agreement():
    order = FiniteOrder.chain(4)
    part = order.restrict([1, 3])
    assert part.elements == (1, 3) and not part.successors
    assert order.agrees_with(part)
    assert not FiniteOrder([3, 1]).agrees_with(part)


# ---------------------------------------------------------------- presentations


def test_omega_prefix():
    prefix = explore_prefix(omega(), 5)
    assert prefix == FiniteOrder.chain(5)
    assert omega().first_element() == 0
    assert omega().predecessor_of(3) == 2
    assert omega().predecessor_of(0) is None


def test_omega_times_two_blocks():
    p = omega_times(2)
    prefix = explore_prefix(p, 6)
    assert prefix.elements == (0, 2, 4, 1, 3, 5)
    assert prefix.successors == {(0, 2), (2, 4), (1, 3), (3, 5)}
    assert p.is_limit(1) and not p.is_limit(3)
    assert [p.fundamental(1, n) for n in range(3)] == [0, 2, 4]
    assert p.predecessor_of(3) == 1


def test_eta_is_dense():
    assert explore_prefix(eta(), 4).elements == (2, 1, 3)
    assert not eta().member(0)
    assert explore_prefix(empty(), 10) == FiniteOrder()
    assert explore_prefix(one_plus_eta(), 4).elements == (0, 2, 1, 3)
    assert one_plus_eta().first_element() == 0


def test_finite_chain_components():
    p = finite_chain(3)
    assert not p.member(3)
    assert p.first_element() == 0 and p.last_element() == 2
    assert p.is_successor(0, 1) and not p.is_successor(0, 2)
    assert p.predecessor_of(2) == 1
    assert p.structured


def test_presentation_text_round_trip():
    p = omega_times(2)
    assert presentation_from_text(p.to_text()) == p
    assert OrderPresentation.from_code(p.code()) == p


def test_presentations_must_be_well_formed():
    with pytest.raises(ProgramSyntaxError):
        presentation_from_text("(presentation (compare 1))")
    with pytest.raises(ProgramSyntaxError):
        presentation_from_text("(presentation (name x) (compare 1) (colour red))")
    with pytest.raises(OrderError):
        eta().first_element()


def test_non_linear_presentation_fails_exploration():
    p = presentation_from_text("(presentation (name broken) (compare (< x (+ y 1))) (successor (= x y)))")
    with pytest.raises(LinearityError):
        explore_prefix(p, 3)
    with pytest.raises(OrderError):
        explore_prefix(omega(), -1)


# ---------------------------------------------------------------- L' = w(1+L)+1


def test_lprime_of_one_point():
    p = lprime(finite_chain(1))
    prefix = explore_prefix(p, 6)
    # (-1, 0) (-1, 1) (-1, 2) (0, 0) INF
    assert prefix.elements == (1, 2, 5, 3, INF)
    assert prefix.successors == {(1, 2), (2, 5)}
    assert p.first_element() == 1 and p.last_element() == INF
    assert p.is_limit(3) and p.is_limit(INF) and not p.is_limit(2)


def test_lprime_fundamental_sequences_climb_to_their_limit():
    p = lprime(finite_chain(1))
    assert [p.fundamental(INF, n) for n in range(3)] == [pair(1, n) + 1 for n in range(3)]
    assert [p.fundamental(3, n) for n in range(3)] == [pair(0, n) + 1 for n in range(3)]
    assert p.predecessor_of(5) == 2
    assert p.predecessor_of(3) is None


# ---------------------------------------------------------------- templates


def test_template_names():
    assert parse_template("omega-pow-2-eta").kind == "omega-pow-eta"
    assert parse_template("omega").size == 1
    assert "omega-times-1" in template_names([1])
    with pytest.raises(TemplateError):
        parse_template("omega-times-x")


def test_finite_and_omega_templates():
    chain = explore_prefix(omega(), 5)
    assert prefix_iso_check(chain, "omega")
    assert prefix_iso_check(chain, "finite-5")
    assert not prefix_iso_check(chain, "finite-3")
    assert prefix_iso_check(chain, "omega-pow-3")


def test_dense_evidence_is_not_omega():
    evidence = PrefixEvidence().add(4, explore_prefix(eta(), 4)).add(8, explore_prefix(eta(), 8))
    assert prefix_iso_check(evidence, "omega-pow-0-eta")
    assert not prefix_iso_check(evidence, "omega")


def test_labelled_blocks_count_against_omega_times():
    p = omega_times(2)
    evidence = PrefixEvidence().add(4, explore_prefix(p, 4)).add(8, explore_prefix(p, 8))
    evidence.labels = {x: x % 2 for x in range(8)}
    assert prefix_iso_check(evidence, "omega-times-2")
    assert not prefix_iso_check(evidence, "omega-times-1")


def test_omega_powers_check_blocks_level_by_level():
    dense = PrefixEvidence().add(4, explore_prefix(eta(), 4)).add(8, explore_prefix(eta(), 8))
    assert not prefix_iso_check(dense, "omega-pow-2")
    assert not prefix_iso_check(dense, "omega-pow-3")

    p = omega_times(2)
    two_blocks = PrefixEvidence().add(4, explore_prefix(p, 4)).add(8, explore_prefix(p, 8))
    two_blocks.labels = {x: x % 2 for x in range(8)}
    assert prefix_iso_check(two_blocks, "omega-pow-2")
    assert not prefix_iso_check(two_blocks, "omega-pow-1")
    two_blocks.outer_labels = {0: 0, 1: 1}
    assert not prefix_iso_check(two_blocks, "omega-pow-2")
    assert prefix_iso_check(two_blocks, "omega-pow-3")


def test_block_arriving_before_the_first_block_breaks_omega_squared():
    evidence = PrefixEvidence().add(3, FiniteOrder([0, 2], [(0, 2)])).add(4, FiniteOrder([1, 0, 2], [(0, 2)]))
    evidence.labels = {0: 5, 2: 5, 1: 4}
    assert prefix_iso_check(evidence, "omega-times-2")
    assert not prefix_iso_check(evidence, "omega-pow-2")


def test_incoherent_snapshots_fail_every_template():
    evidence = PrefixEvidence().add(2, FiniteOrder([0, 1])).add(3, FiniteOrder([1, 0, 2]))
    assert not prefix_iso_check(evidence, "omega-pow-2")


# ---------------------------------------------------------------- embeddings


def test_embedding_into_naturals():
    assert embed_check(omega(), 3, CnfOrdinal.from_int(3), 6).is_true
    assert embed_check(omega(), 2, CnfOrdinal.from_int(3), 6).is_true
    assert embed_check(omega(), 3, CnfOrdinal.from_int(2), 6).is_false
    assert embed_check(omega(), 4, OMEGA, 6).is_true


def test_embedding_edge_cases():
    assert embed_check(omega(), 10, ONE, 5).is_unknown
    with pytest.raises(OrderError):
        embed_check(omega(), 0, OMEGA, 5, n=1)


def test_embedding_satisfies_its_recursion():
    assert recursion_violations(omega(), 5, [ONE, CnfOrdinal.from_int(2), OMEGA]) == []


# ---------------------------------------------------------------- trees


def test_bounded_tree_nodes():
    tree = SequenceTree.bounded(2, 2)
    assert len(list(tree.nodes(3, 3))) == 7
    assert tree.prefix_closed(3, 3)
    assert not SequenceTree.finite([(), (0, 1)]).prefix_closed(2, 2)


def test_kleene_brouwer_order():
    assert kb_leq((0,), ())
    assert not kb_leq((), (1,))
    assert kb_sorted([(), (1,), (0,), (0, 0)]) == [(0, 0), (0,), (1,), ()]
    p = kleene_brouwer(SequenceTree.finite([(), (0,), (1,)]))
    assert p.leq(seq_encode((0,)), seq_encode(()))
    assert not p.leq(seq_encode(()), seq_encode((1,)))
    assert not p.member(seq_encode((0, 0)))


def test_fuel_exhaustion_inside_formulas_is_unknown():
    slow = presentation_from_text("(presentation (name slow) (compare (forall-below v 100 (<= x y))) (fuel 5))")
    le = Rel("Le", (Num(slow.code()), Num(0), Num(1)))
    assert evaluate(le, 10).is_unknown
    assert evaluate(Or(le, Eq(Num(0), Num(0))), 10).is_true
    assert evaluate_window(And(le, Eq(Num(0), Num(1))), 10).is_false
    with pytest.raises(FuelExhaustedError):
        slow.leq(0, 1)


def test_comparison_cache_is_shared_across_threads():
    text = omega_times(3).to_text()
    p = presentation_from_text(text)
    assert presentation_from_text(text + "\n") is p
    pairs = [(x, y) for x in range(12) for y in range(12)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda pair: p.leq(*pair), pairs))
    assert results == [x % 3 < y % 3 or (x % 3 == y % 3 and x <= y) for x, y in pairs]
    assert p.renamed("other").leq(0, 3)
