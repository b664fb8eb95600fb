"""Normal-mode splitting of the red-sideband squeezing spectrum.

When 8g² > μ² + (γ + 4χ)² the squeezing maximum moves off resonance to a
pair of minima of S_s(ω) that approach ±g at strong coupling.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy import optimize

from ..errors import ParameterError
from ..model.drift import build_drift
from ..model.drive import DriveMode
from ..params.types import EffectiveParams
from .output import output_correlations

logger = logging.getLogger(__name__)

MARGINAL_TOL = 1e-9
SCAN_POINTS = 4001


@dataclass(frozen=True)
class SplittingReport:
    """Outcome of the splitting test.

    Attributes:
        split: 8g² exceeds μ² + (γ + 4χ)²
        marginal: The two sides agree to within rounding
        predicted_peaks: The strong-coupling asymptotes (-g, +g)
        expected_minima: ±sqrt(g² - (μ² + (γ + 4χ)²)/8) when split
        found_minima: Local minima of the spectrum located numerically
    """

    split: bool
    marginal: bool
    predicted_peaks: Tuple[float, float]
    expected_minima: Tuple[float, ...] = ()
    found_minima: List[float] = field(default_factory=list)

    def relative_offsets(self) -> List[float]:
        """|ω_min| / g - 1 for each located minimum."""
        g = self.predicted_peaks[1]
        if g == 0:
            return []
        return [abs(w) / g - 1.0 for w in self.found_minima]


def _squeezed_value(model, theta: float, omega: float) -> float:
    corr = output_correlations(model, np.array([omega]))
    phase = np.exp(-2j * theta) * corr.aa[0] + np.exp(2j * theta) * corr.adad[0]
    return float((phase + 2.0 * corr.ada[0]).real)


def _locate_minima(params: EffectiveParams, theta: float) -> List[float]:
    model = build_drift(params, DriveMode.red())
    reach = 3.0 * max(params.g, params.mu, params.gamma + 4 * abs(params.chi))
    omega = np.linspace(-reach, reach, SCAN_POINTS)
    corr = output_correlations(model, omega)
    phase = np.exp(-2j * theta) * corr.aa + np.exp(2j * theta) * corr.adad
    values = (phase + 2.0 * corr.ada).real

    centre = values[1:-1]
    interior = np.flatnonzero((centre < values[:-2]) & (centre < values[2:])) + 1
    xatol = 1e-4 * max(params.g, np.finfo(float).tiny)
    minima = []
    for index in interior:
        result = optimize.minimize_scalar(
            lambda w: _squeezed_value(model, theta, w),
            bounds=(omega[index - 1], omega[index + 1]),
            method="bounded",
            options={"xatol": xatol},
        )
        minima.append(float(result.x))
    return minima


def detect_normal_mode_splitting(
    params: EffectiveParams, theta: float = -math.pi / 4
) -> SplittingReport:
    """Test for normal-mode splitting and locate the spectral minima.

    Args:
        params: Red-sideband parameters with real χ
        theta: Local-oscillator phase of the squeezed quadrature

    Returns:
        Splitting report; minima are only searched for when split or marginal
    """
    if not params.chi_is_real:
        raise ParameterError("splitting detection assumes real chi")
    g = params.g
    s = params.gamma + 4 * params.chi.real
    lhs = 8 * g**2
    rhs = params.mu**2 + s**2
    marginal = abs(lhs - rhs) <= MARGINAL_TOL * rhs
    split = lhs > rhs and not marginal

    expected: Tuple[float, ...] = ()
    found: List[float] = []
    if split or marginal:
        offset = g**2 - rhs / 8
        if offset > 0:
            root = math.sqrt(offset)
            expected = (-root, root)
        found = _locate_minima(params, theta)
        logger.info("normal-mode splitting minima at %s rad/s", found)
    return SplittingReport(
        split=split,
        marginal=marginal,
        predicted_peaks=(-g, g),
        expected_minima=expected,
        found_minima=found,
    )
