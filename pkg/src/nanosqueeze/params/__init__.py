"""Device and model parameters, and the derivation between them."""

from .derivation import (
    circulating_power,
    cooling_rate,
    decay_rate_from_q,
    derive_chi,
    derive_effective,
    derive_g,
    derive_kappa,
    drive_photon_number,
    parametric_spring_amplitude,
    required_pump_product,
    spring_constant_change,
    thermal_occupation,
    zero_point_width,
)
from .feasibility import FeasibilityCheck, FeasibilityReport, feasibility_report
from .types import EffectiveParams, PhysicalParams
from .units import parse_angular_frequency

__all__ = [
    "EffectiveParams",
    "PhysicalParams",
    "FeasibilityCheck",
    "FeasibilityReport",
    "circulating_power",
    "cooling_rate",
    "decay_rate_from_q",
    "derive_chi",
    "derive_effective",
    "derive_g",
    "derive_kappa",
    "drive_photon_number",
    "feasibility_report",
    "parametric_spring_amplitude",
    "parse_angular_frequency",
    "required_pump_product",
    "spring_constant_change",
    "thermal_occupation",
    "zero_point_width",
]
