"""Output-field squeezing spectra."""

from .amplifier import amplifier_noise
from .closed_form import closed_form_spectrum
from .grid import default_span, make_grid
from .integral import (
    CalibrationResult,
    calibrate_normalization,
    integrate_spectrum,
    kappa_norm,
)
from .output import (
    OutputCorrelations,
    adiabatic_output_relation,
    output_correlations,
    output_spectrum,
    transfer_matrix,
)
from .splitting import SplittingReport, detect_normal_mode_splitting
from .types import AmplifierSettings, SpectrumGrid, SpectrumResult

__all__ = [
    "AmplifierSettings",
    "CalibrationResult",
    "OutputCorrelations",
    "SpectrumGrid",
    "SpectrumResult",
    "SplittingReport",
    "adiabatic_output_relation",
    "amplifier_noise",
    "calibrate_normalization",
    "closed_form_spectrum",
    "default_span",
    "detect_normal_mode_splitting",
    "integrate_spectrum",
    "kappa_norm",
    "make_grid",
    "output_correlations",
    "output_spectrum",
    "transfer_matrix",
]
