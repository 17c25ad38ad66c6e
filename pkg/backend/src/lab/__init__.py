"""Stage constructions: limit approximations, locally coherent sequences and jump-inversion machines."""

from .stages import StageSequence, coherence_issue, stage_max_instabilities, stage_max_presentation, stage_sequence
from .approx import (
    ApproxSequence, LimitDecomposition, LimitReport, ackermann_decode, ackermann_encode, largest_linear_subset,
    limit_decompose, limit_of, limit_to_stages,
)
from .jump_omega import JumpOmegaMachine, MachineState, jump_inv_omega_times, omega_machine
from .jump_copy import Block, JumpCopyMachine, copy_machine, jump_inv_copy
from .ash_knight import AshKnightFamily, ash_knight_family, first_counterexample, sentence_order

__all__ = [
    "StageSequence", "coherence_issue", "stage_max_instabilities", "stage_max_presentation", "stage_sequence",
    "ApproxSequence", "LimitDecomposition", "LimitReport", "ackermann_decode", "ackermann_encode",
    "largest_linear_subset", "limit_decompose", "limit_of", "limit_to_stages",
    "JumpOmegaMachine", "MachineState", "jump_inv_omega_times", "omega_machine",
    "Block", "JumpCopyMachine", "copy_machine", "jump_inv_copy",
    "AshKnightFamily", "ash_knight_family", "first_counterexample", "sentence_order",
]
