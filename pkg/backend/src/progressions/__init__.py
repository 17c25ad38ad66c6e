"""Reflection progressions, ordinal notations and certificate bundles."""

from .registry import ProgramRegistry, RegistryEntry, default_registry, use_registry
from .notations import NotationTerm, cnf_supremum, notation_map_g, notation_ordinal, order_notation, walk
from .reflection import (
    TheorySpec, build_ax_progression, is_reflection_instance, notation_recognizer, render_LO, render_TI_instance,
    render_WO, render_reflection_instance, rfn_case, stage_theory,
)
from .bundle import CertificateBundle, read_instance, verify_bundle

__all__ = [
    "ProgramRegistry", "RegistryEntry", "default_registry", "use_registry",
    "NotationTerm", "cnf_supremum", "notation_map_g", "notation_ordinal", "order_notation", "walk",
    "TheorySpec", "build_ax_progression", "is_reflection_instance", "notation_recognizer", "render_LO",
    "render_TI_instance", "render_WO", "render_reflection_instance", "rfn_case", "stage_theory",
    "CertificateBundle", "read_instance", "verify_bundle",
]
