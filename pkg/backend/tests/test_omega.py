from __future__ import annotations

import pytest

from src.errors import CertificateError, ChainError, FormulaError, RefutationAborted
from src.logic import parse
from src.omega import (
    NodeKind, ProofCertificate, RuleCase, Sequent, Stammbaum, extend, prove_true, refutation_path, refute_false, replay,
    stammbaum_descending_chain, stammbaum_kb,
)
from src.omega.certificate import height_parts, limit_height
from src.ordinals import OMEGA, CnfOrdinal, parse_ordinal


def heights(*values):
    return [CnfOrdinal.from_int(v) for v in values]


# ---------------------------------------------------------------- Stammbaum


def test_conjunction_has_two_children():
    tree = Stammbaum(parse("0 = 0 and 1 = 1"))
    assert tree.root.kind is NodeKind.REDUCIBLE and tree.root.case is RuleCase.AND
    assert len(tree.children(tree.root, 5)) == 2
    assert tree.node((2,)) is None
    assert len(tree.chain((1,))) == 2


def test_leaves_do_not_extend():
    tree = Stammbaum(parse("0 = 1 or 1 = 1"))
    leaf = tree.node((0,))
    assert leaf.kind is NodeKind.AXIOMATIC
    with pytest.raises(ChainError):
        extend(leaf)


def test_exists_appends_fresh_instances():
    tree = Stammbaum(parse("exists x. x = 2"))
    assert [len(tree.node((0,) * k).sequent) for k in range(4)] == [1, 2, 3, 4]
    assert tree.node((0, 0, 0)).kind is NodeKind.AXIOMATIC


def test_sequents_hold_sentences_only():
    with pytest.raises(ChainError):
        Sequent.of(parse("x = 0", free=["x"]))
    with pytest.raises(FormulaError):
        Stammbaum(parse("x = 0", free=["x"]))


# ---------------------------------------------------------------- certificates


def test_height_helpers():
    assert height_parts(parse_ordinal("w·2 + 3")) == (2, 3)
    with pytest.raises(CertificateError):
        height_parts(parse_ordinal("w^2"))
    assert limit_height([]) == CnfOrdinal.from_int(1)
    assert limit_height(heights(2, 2, 2, 2)) == CnfOrdinal.from_int(3)
    assert limit_height(heights(0, 1, 2, 3)) == OMEGA


def test_universal_certificate_replays():
    certificate = prove_true(parse("forall x. x = x"), 4)
    assert certificate.height == CnfOrdinal.from_int(1)
    assert certificate.height < certificate.bound == OMEGA * 2
    report = replay(certificate, width=8)
    assert report.ok, report.violations
    assert report.leaves == 8
    assert report.rebuilt == 4


def test_existential_certificate_height():
    certificate = prove_true(parse("exists x. x = 2"), 5)
    assert certificate.height == CnfOrdinal.from_int(3)
    assert replay(certificate).ok


def test_certificate_survives_a_file_round_trip(tmp_path):
    certificate = prove_true(parse("forall x. x = x"), 3)
    path = certificate.save(str(tmp_path / "proof.certificate.json"))
    loaded = ProofCertificate.load(path)
    assert loaded.height == certificate.height
    assert loaded.psi_code == certificate.psi_code
    assert replay(loaded).ok


def test_false_sentences_get_no_certificate():
    assert prove_true(parse("forall x. x = 0"), 4) is None


def test_tampered_certificates_are_caught():
    certificate = prove_true(parse("forall x. x = x"), 3)
    certificate.root.premises[0].sequent = ["1 = 0"]
    assert not replay(certificate).ok
    certificate = prove_true(parse("forall x. x = x"), 3)
    certificate.root.height = OMEGA * 5
    assert not replay(certificate).ok


def test_unknown_certificate_versions_are_rejected():
    data = prove_true(parse("forall x. x = x"), 2).to_dict()
    data["version"] = "other/0"
    with pytest.raises(CertificateError):
        ProofCertificate.from_dict(data)


# ---------------------------------------------------------------- refutations


def test_refutation_ends_at_a_false_literal():
    sequents = list(refute_false(parse("forall x. x < 3"), 5))
    assert len(sequents) == 2
    assert refutation_path(parse("forall x. x < 3"), 5, 10) == (3,)


def test_true_sentences_cannot_be_refuted():
    with pytest.raises(RefutationAborted):
        list(refute_false(parse("forall x. x = x"), 5))


def test_endless_refutation_descends_in_the_stammbaum_order():
    psi = parse("exists x. x = x + 1")
    p = stammbaum_kb(psi)
    codes = stammbaum_descending_chain(p, psi, 5, length=4)
    assert len(codes) == 4
    assert all(p.less(lower, upper) for upper, lower in zip(codes, codes[1:]))
