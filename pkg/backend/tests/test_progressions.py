from __future__ import annotations

import pytest

from src.errors import ArityError, CertificateError, ProgressionError, RegistryError, ShapeError
from src.logic import Num, parse, substitute
from src.logic.evaluate import evaluate_window
from src.logic.formula import free_vars, normalize
from src.logic.goedel import goedel_encode, seq_encode
from src.ordinals import OMEGA, CnfOrdinal, parse_ordinal
from src.orders import empty, evaluate_program, finite_chain, lprime, omega
from src.orders.constructors import INF
from src.progressions import (
    CertificateBundle, NotationTerm, ProgramRegistry, TheorySpec, build_ax_progression, cnf_supremum,
    is_reflection_instance, notation_map_g, notation_ordinal, notation_recognizer, order_notation, read_instance,
    render_LO, render_TI_instance, render_WO, render_reflection_instance, rfn_case, stage_theory, verify_bundle, walk,
)
from src.progressions.bundle import instance_formula

Q0_SUCC = parse("forall x. S(x) != 0")
Q0 = TheorySpec.finite("Q0", [Q0_SUCC, parse("forall x. x + 0 = x")])
PHI = parse("x = x", free=["x"])


def ordinals(*values):
    return [CnfOrdinal.from_int(v) if isinstance(v, int) else parse_ordinal(v) for v in values]


# ---------------------------------------------------------------- registry


def test_registry_deduplicates_programs(registry):
    e = registry.register(("+", "n", 1))
    assert registry.register(("+", "n", 1)) == e
    assert registry.register(("*", "n", 2)) == e + 1
    assert registry.call(e, 4) == 5
    assert evaluate_program(("call", e, 2)) == 3


def test_registry_persists_its_entries(tmp_path):
    path = str(tmp_path / "registry.jsonl")
    first = ProgramRegistry(path)
    first.register(("+", "n", 1))
    first.register(("*", "n", 2))
    reopened = ProgramRegistry(path)
    assert len(reopened) == 2
    assert reopened.register(("*", "n", 2)) == 1
    assert reopened.call(1, 5) == 10


def test_registry_errors(tmp_path, registry):
    with pytest.raises(RegistryError):
        registry.entry(3)
    with pytest.raises(RegistryError):
        registry.register(("+", "n", 1), kind="mystery")
    path = tmp_path / "broken.jsonl"
    path.write_text('{"index": 4, "kind": "program", "program": "n"}\n')
    with pytest.raises(RegistryError):
        ProgramRegistry(str(path))


# ---------------------------------------------------------------- notations


def test_notation_shapes():
    assert NotationTerm.parse(1) == NotationTerm.base()
    assert NotationTerm.parse(1).value == 1
    four = NotationTerm.parse(4)
    assert four.shape == "successor" and four.value == 4
    assert NotationTerm.parse(15) == NotationTerm.limit(1)
    assert NotationTerm.parse(6) == NotationTerm.other(6)
    assert str(NotationTerm.base()) == "2^(0)"
    with pytest.raises(ProgressionError):
        NotationTerm.parse(-1)


def test_walk_follows_successors(registry):
    assert walk(4, seq_encode([0, 0]), registry) == 2
    assert walk(6, seq_encode([0]), registry) == 0
    assert walk(4, 1, registry) == 0


def test_walk_follows_limits(registry):
    e = registry.register(("*", "n", 2))
    assert walk(3 * 5 ** e, seq_encode([3]), registry) == 7


def test_cnf_supremum():
    assert cnf_supremum(ordinals(0, 1, 2, 3)) == OMEGA
    assert cnf_supremum(ordinals("w", "w·2", "w·3", "w·4")) == parse_ordinal("w^2")
    assert cnf_supremum(ordinals("w + 1", "w + 2", "w + 3", "w + 4")) == OMEGA * 2
    assert cnf_supremum(ordinals(1)) is None
    assert cnf_supremum(ordinals(3, 2, 1, 0)) is None


def test_notation_ordinals_of_finite_terms(registry):
    assert notation_ordinal(NotationTerm.base(), 4, registry) == CnfOrdinal.from_int(1)
    assert notation_ordinal(NotationTerm.parse(4), 4, registry) == CnfOrdinal.from_int(3)


@pytest.mark.parametrize("factory, expected", [
    (empty, "w + 1"),
    (lambda: finite_chain(1), "w·2 + 1"),
    (lambda: finite_chain(2), "w·3 + 1"),
])
def test_order_notation_of_lprime(registry, factory, expected):
    term, ordinal = order_notation(factory(), 8, registry)
    assert term.shape == "successor" and term.pred.shape == "limit"
    assert ordinal == parse_ordinal(expected)


def test_g_is_symbolic_and_reused(registry):
    p = lprime(finite_chain(1))
    first = notation_map_g(p, INF, registry)
    assert notation_map_g(p, INF, registry) == first
    assert len(registry) == 1


def test_g_needs_structure(registry):
    with pytest.raises(ProgressionError):
        notation_map_g(omega(), 3, registry)
    with pytest.raises(ProgressionError):
        notation_map_g(finite_chain(2), 5, registry)


# ---------------------------------------------------------------- theories and reflection


def test_finite_theory_recognizes_its_axioms():
    assert Q0.recognizes(goedel_encode(normalize(Q0_SUCC)), 1).is_true
    assert Q0.recognizes(goedel_encode(PHI), 1).is_false


def test_theory_recognizers_are_checked():
    with pytest.raises(ArityError):
        TheorySpec("bad", parse("y = z", free=["y", "z"]))
    with pytest.raises(ShapeError):
        TheorySpec("bad", parse("forall z. y = z", free=["y"]))
    with pytest.raises(ArityError):
        TheorySpec.schematic("bad", parse("0 = 0"), "n")


def test_reflection_instances_are_recognized():
    rho = render_reflection_instance(Q0, PHI)
    assert not free_vars(rho)
    assert is_reflection_instance(goedel_encode(rho), goedel_encode(Q0.axiom))
    assert not is_reflection_instance(goedel_encode(Q0_SUCC), goedel_encode(Q0.axiom))
    with pytest.raises(ArityError):
        render_reflection_instance(Q0, Q0_SUCC)


def test_progression_along_a_two_chain(chain2):
    delta = build_ax_progression(Q0, chain2)

    def ax(b, y):
        return evaluate_window(substitute(delta, {"x": Num(b), "y": Num(y)}), 2)

    rho = render_reflection_instance(stage_theory(delta, 0), PHI)
    assert ax(0, goedel_encode(normalize(Q0_SUCC))).is_true
    assert ax(1, goedel_encode(rho)).is_true
    assert ax(5, goedel_encode(normalize(Q0_SUCC))).is_false


def test_rfn_cases(registry):
    assert rfn_case(NotationTerm.other(6), Q0, registry) is Q0.axiom
    with pytest.raises(RegistryError):
        rfn_case(NotationTerm.limit(3), Q0, registry)
    two = rfn_case(NotationTerm.parse(2), Q0, registry)
    rho = render_reflection_instance(stage_theory(notation_recognizer(Q0), 1), PHI)
    assert evaluate_window(substitute(two, {"y": Num(goedel_encode(rho))}), 3).is_true


def test_schemata_on_a_finite_order():
    one = finite_chain(1)
    assert evaluate_window(render_TI_instance(one, PHI), 3).is_true
    assert evaluate_window(render_LO(finite_chain(2)), 3).is_true
    assert "forall Y." in render_WO(one)
    with pytest.raises(ArityError):
        render_TI_instance(one, parse("x = y", free=["x", "y"]))


# ---------------------------------------------------------------- bundles


def test_bundle_round_trip(tmp_path):
    bundle = CertificateBundle(finite_chain(2), NotationTerm.parse(4), CnfOrdinal.from_int(3), element=1, depth=4)
    bundle.add_instance("rfn", render_reflection_instance(Q0, PHI)).add_instance("note", "0 = 0")
    bundle.add_instance("big", "0 = 0 and " * 8000 + "0 = 0")
    bundle.write(str(tmp_path))
    assert (tmp_path / "instances" / "big.txt.zst").exists()
    assert verify_bundle(str(tmp_path)) == []
    assert read_instance(str(tmp_path), "note") == "0 = 0"
    assert instance_formula(str(tmp_path), "note") == parse("0 = 0")
    assert read_instance(str(tmp_path), "big").startswith("0 = 0 and")


def test_bundle_tampering_is_reported(tmp_path):
    CertificateBundle(finite_chain(2)).write(str(tmp_path))
    (tmp_path / "presentation.txt").write_text("(presentation (name other) (compare 1))\n")
    assert verify_bundle(str(tmp_path)) == ["presentation.txt"]
    with pytest.raises(CertificateError):
        verify_bundle(str(tmp_path / "missing"))
