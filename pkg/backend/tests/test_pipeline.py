from __future__ import annotations

import pytest

from src.errors import FormulaError
from src.logic import parse
from src.logic.goedel import seq_encode
from src.pipeline.sentence import (
    explore_tree, find_branch, no_extension_certificate, run_pipeline, sentence_to_order, sentence_to_tree,
)


def test_true_sentence_gives_a_well_founded_tree():
    report = run_pipeline(parse("exists x. x = S(0)"), depth=6)
    assert report.well_founded_evidence
    assert report.branch is None and report.chain == []
    # the only dead child of the root is the witness 1
    assert (1,) not in report.certificate.nodes
    assert all(len(node) <= 1 for node in report.certificate.nodes)


def test_false_sentence_gives_a_descending_chain():
    report = run_pipeline(parse("exists x. x < 0"), depth=6, width=6, chain_length=10)
    assert not report.well_founded_evidence
    assert report.branch == (0,) * 10
    assert report.chain == [seq_encode((0,) * k) for k in range(1, 11)]
    p = report.presentation
    assert all(p.less(lower, upper) for upper, lower in zip(report.chain, report.chain[1:]))


def test_report_serializes_its_parts():
    data = run_pipeline(parse("exists x. x = S(0)"), depth=4).to_dict()
    assert data["certificate"]["kind"] == "no-extension"
    assert data["certificate"]["holds"] is True
    assert data["presentation"].startswith("(presentation (name kb-sentence)")
    assert data["branch"] is None


def test_tree_helpers():
    tree = sentence_to_tree(parse("exists x. x < 0"))
    assert len(explore_tree(tree, 2, 2)) == 7
    assert find_branch(tree, 3, width=2) == (0, 0, 0)
    assert not no_extension_certificate(tree, 3, 2).holds
    assert sentence_to_order(parse("exists x. x < 0")).name == "kb-sentence"


def test_open_formulas_are_rejected():
    with pytest.raises(FormulaError):
        run_pipeline(parse("x = 0", free=["x"]))
