"""Steady-state moments, quadrature squeezing and final phonon numbers."""

from .moments import MomentState, ModeMoments, moment_system, solve_steady_moments
from .phonons import final_phonon_number
from .squeezing import (
    CavityRelationReport,
    OptimalPhases,
    QuadratureSqueezing,
    cavity_nanores_relation_check,
    closed_form_SYm,
    optimal_phases,
    optimal_quadrature,
    quadrature_squeezing,
    red_threshold_SYm,
    wrap_half_turn,
)

__all__ = [
    "MomentState",
    "ModeMoments",
    "moment_system",
    "solve_steady_moments",
    "final_phonon_number",
    "CavityRelationReport",
    "OptimalPhases",
    "QuadratureSqueezing",
    "cavity_nanores_relation_check",
    "closed_form_SYm",
    "optimal_phases",
    "optimal_quadrature",
    "quadrature_squeezing",
    "red_threshold_SYm",
    "wrap_half_turn",
]
