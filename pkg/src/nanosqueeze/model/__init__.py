"""Drive modes, drift matrices and stability of the linearised model."""

from .drive import DriveKind, DriveMode
from .drift import DriftModel, MODE_LABELS, build_drift, input_correlations
from .stability import (
    StabilityCondition,
    StabilityReport,
    analytic_conditions,
    stability,
    stability_threshold,
)

__all__ = [
    "DriveKind",
    "DriveMode",
    "DriftModel",
    "MODE_LABELS",
    "build_drift",
    "input_correlations",
    "StabilityCondition",
    "StabilityReport",
    "analytic_conditions",
    "stability",
    "stability_threshold",
]
