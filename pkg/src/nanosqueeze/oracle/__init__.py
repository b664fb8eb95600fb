"""Fock-space master-equation oracles for the Gaussian machinery."""

from .consistency import AdiabaticReport, adiabatic_consistency
from .fock import (
    FockConfig,
    FockResult,
    collapse_operators,
    effective_hamiltonian,
    full_me_steady,
    gaussianity_residual,
    liouvillian_trace_residual,
    mixed_test_state,
    mode_operators,
)
from .reduced import ReducedResult, reduced_collapse_operators, reduced_me_steady

__all__ = [
    "AdiabaticReport",
    "FockConfig",
    "FockResult",
    "ReducedResult",
    "adiabatic_consistency",
    "collapse_operators",
    "effective_hamiltonian",
    "full_me_steady",
    "gaussianity_residual",
    "liouvillian_trace_residual",
    "mixed_test_state",
    "mode_operators",
    "reduced_collapse_operators",
    "reduced_me_steady",
]
