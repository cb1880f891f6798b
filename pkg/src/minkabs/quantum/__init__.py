"""Lattice realization of the scalar particle and its localization."""

from .config import ModelConfig
from .state import (
    BoostReport,
    LatticeState,
    apply_boost,
    apply_poincare,
    apply_rotation,
    apply_translation,
    make_gaussian,
    rapidity_of,
    represent,
    signed_permutation_of,
)
from .pvm import (
    NwComponentStats,
    NwPosition,
    PvmHandle,
    apply_position_family,
    canonical_map,
    localization_probability,
    nw_component_stats,
    nw_expectation,
    position_multipliers,
    pvm_project,
    rasterize,
)

__all__ = [
    "ModelConfig",
    "LatticeState",
    "BoostReport",
    "make_gaussian",
    "apply_translation",
    "apply_rotation",
    "apply_boost",
    "apply_poincare",
    "represent",
    "rapidity_of",
    "signed_permutation_of",
    "PvmHandle",
    "NwPosition",
    "NwComponentStats",
    "rasterize",
    "canonical_map",
    "pvm_project",
    "localization_probability",
    "position_multipliers",
    "apply_position_family",
    "nw_expectation",
    "nw_component_stats",
]
