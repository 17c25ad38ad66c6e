from __future__ import annotations

import json

import pytest

from src.errors import FormulaError, PreconditionViolation, StageMachineError
from src.lab import (
    AshKnightFamily, ApproxSequence, ash_knight_family, first_counterexample, sentence_order, StageSequence, ackermann_decode, ackermann_encode, copy_machine,
    jump_inv_copy, jump_inv_omega_times, largest_linear_subset, limit_decompose, limit_of, limit_to_stages,
    omega_machine, stage_max_instabilities,
)
from src.logic import parse
from src.orders import FiniteOrder, explore_prefix, omega, prefix_iso_check, presentation_from_text

EVEN = ("=", ("mod", "y", 2), 0)
ODD = ("=", ("mod", "y", 2), 1)


def explicit(*orders):
    return StageSequence.explicit([FiniteOrder(order) for order in orders])


# ---------------------------------------------------------------- limits


def test_ackermann_codes():
    assert ackermann_encode({0, 3}) == 9
    assert ackermann_decode(9) == {0, 3}
    assert ackermann_decode(0) == frozenset()


def test_limit_report_tracks_changes():
    approx = ApproxSequence.explicit([{1}, {1, 2}, {2}], declared_limit={2})
    report = limit_of(approx, bound=4, stages=5)
    assert report.limit == {2}
    assert report.settled_at[1] == 2 and report.settled_at[2] == 1
    assert report.stabilized_at == 2
    assert report.oscillating(threshold=1) == [1, 2]
    assert report.to_dict()["declared_agrees"] is True


def test_limit_report_needs_a_stage():
    with pytest.raises(StageMachineError):
        limit_of(ApproxSequence.constant({1}), bound=3, stages=0)


def test_limit_decomposition_recovers_the_even_numbers():
    approx = limit_decompose(EVEN, ODD, declared_limit=range(0, 6, 2))
    assert approx[7] == {0, 2, 4, 6}
    report = limit_of(approx, bound=6, stages=8)
    assert report.limit == {0, 2, 4}
    assert report.to_dict()["declared_agrees"] is True


def test_largest_linear_subset():
    chain = {(x, x) for x in range(3)} | {(0, 1), (1, 2), (0, 2)}
    assert largest_linear_subset([0, 1, 2], frozenset(chain)) == ((0, 1, 2), True)
    cycle = frozenset({(x, x) for x in range(3)} | {(0, 1), (1, 0)})
    assert largest_linear_subset([0, 1, 2], cycle) == ((0,), True)
    assert largest_linear_subset([0, 1, 2], cycle, exact_limit=0) == ((0,), False)


def test_limit_to_stages_reads_the_field():
    # <0,0> = 0, <0,1> = 1, <1,1> = 5
    stages = limit_to_stages(ApproxSequence.constant({0, 1, 5}))
    assert stages[0] == FiniteOrder()
    assert stages[3].elements == (0, 1)
    assert stages.locally_coherent(4)


# ---------------------------------------------------------------- stage sequences


def test_presentation_prefixes_are_coherent():
    stages = StageSequence.from_presentation(omega())
    assert stages[3] == FiniteOrder.chain(4)
    assert stages.locally_coherent(5)
    assert stage_max_instabilities(stages, 4) == []


def test_coherence_violations_name_the_stage():
    assert explicit([0, 1], [1, 0]).coherence_violations(2) == [(0, "order differs on shared elements")]
    dropped = StageSequence.explicit([FiniteOrder.chain(2), FiniteOrder([0, 1])])
    assert dropped.coherence_violations(2) == [(0, "successor pairs dropped: [(0, 1)]")]
    with pytest.raises(StageMachineError):
        dropped[-1]


# ---------------------------------------------------------------- jump machines


def test_omega_machine_on_a_point_builds_omega():
    stages = explicit([0])
    p = jump_inv_omega_times(stages)
    prefix = explore_prefix(p, 6)
    assert prefix.elements == (0, 2, 3, 4, 5)
    assert prefix.successors == {(0, 2), (2, 3), (3, 4), (4, 5)}
    assert prefix_iso_check(prefix, "omega")
    assert omega_machine(stages).audit(5) == []


def test_machines_are_shared_with_their_output_sequence():
    stages = explicit([0], [0, 1])
    assert stages.machine is None
    assert explicit([0], [0, 1]) is stages
    machine = omega_machine(stages)
    assert omega_machine(explicit([0], [0, 1])) is machine
    assert StageSequence.explicit([FiniteOrder([0])]).machine is None
    assert copy_machine(stages) is copy_machine(explicit([0], [0, 1]))


def test_omega_machine_opens_one_block_per_label():
    machine = omega_machine(explicit([0], [0, 1]))
    assert machine.state(1).blocks() == {0: [0, 3], 1: [2, 4]}
    assert len(machine.trace.of_kind("add")) == 1
    assert len(machine.trace.of_kind("grow")) == 2


def test_omega_machine_retracts_and_seals():
    machine = omega_machine(explicit([0], [0, 1], [0, 2]))
    state = machine.state(2)
    assert state.labels[2] == 0 and state.labels[4] == 0
    assert (3, 2) in state.order.successors
    assert [event.payload["element"] for event in machine.trace.of_kind("retract")] == [1]
    assert machine.audit(3) == []


@pytest.mark.parametrize("orders", [([1, 0],), ([0, 3],)])
def test_omega_machine_preconditions(orders):
    with pytest.raises(PreconditionViolation):
        omega_machine(explicit(*orders)).state(0)


def test_copy_machine_blocks():
    stages = explicit([0], [0, 1])
    machine = copy_machine(stages)
    assert machine.state(1).order.elements == (0, 2)
    assert machine.audit(3) == []
    blocks = machine.blocks(2)
    assert blocks[1].anchor == 1 and blocks[1].members == [2]
    assert explore_prefix(jump_inv_copy(stages), 5).elements == (0, 2)


# ---------------------------------------------------------------- Ash-Knight families


PHI = parse("forall y. x + y != 3", free=["x"])


def test_true_instances_give_a_point():
    family = AshKnightFamily(PHI, 0)
    evidence = family.evidence(5, bounds=(6, 10))
    assert evidence.final.elements == (0,)
    assert prefix_iso_check(evidence, "finite-1")


def test_false_instances_densify():
    family = AshKnightFamily(PHI, 0)
    evidence = family.evidence(0, bounds=(6, 10))
    assert evidence.snapshots[0].elements == (0, 4, 5)
    assert prefix_iso_check(evidence, "omega-pow-0-eta")
    assert not prefix_iso_check(evidence, "finite-1")


def test_base_stages_start_after_the_counterexample():
    stages = AshKnightFamily(PHI, 0).base_stages(0)
    assert stages[3].elements == (0,)
    assert set(stages[4].elements) == {0, 4}
    assert set(stages[7].elements) == {0, 4, 5, 6, 7}
    assert stages[7].first == 0


def test_one_jump_gives_omega_on_true_instances():
    family = AshKnightFamily(PHI, 1)
    evidence = family.evidence(5, bounds=(6, 10))
    assert set(evidence.labels.values()) == {0}
    assert prefix_iso_check(evidence, "omega")


async def test_explore_runs_every_index():
    family = AshKnightFamily(PHI, 0)
    results = await family.explore([0, 5], bounds=(6, 10))
    assert sorted(results) == [0, 5]
    assert results[5].final.elements == (0,)


def test_export_writes_an_index(tmp_path):
    family = AshKnightFamily(PHI, 0)
    paths = family.export(str(tmp_path), [0, 5])
    assert len(paths) == 2
    index = json.loads((tmp_path / "index.json").read_text())
    assert index["n"] == 0 and index["files"] == {"0": "0.presentation", "5": "5.presentation"}
    assert presentation_from_text((tmp_path / "5.presentation").read_text()) == family.presentation(5)


@pytest.mark.parametrize("phi, n", [
    (parse("exists y. x = y", free=["x"]), 1),
    (parse("forall y < 3. x = y", free=["x"]), 1),
    (PHI, -1),
])
def test_family_shape_is_checked(phi, n):
    with pytest.raises(FormulaError):
        AshKnightFamily(phi, n)


def test_first_counterexample_waits_for_its_stage():
    assert first_counterexample(PHI, "x", 0, 3) is None
    assert first_counterexample(PHI, "x", 0, 6) == 3
    assert first_counterexample(PHI, "x", 5, 10) is None


def test_sentence_order_of_a_true_sentence():
    p = sentence_order(parse("forall y. y = y"), 0)
    assert explore_prefix(p, 5).elements == (0,)
    topped = sentence_order(parse("forall y. y = y"), 0, with_top=True)
    assert explore_prefix(topped, 3).elements == (0, 1)
    assert ash_knight_family(PHI, 1).presentation(5) == AshKnightFamily(PHI, 1).presentation(5)
