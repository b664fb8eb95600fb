"""Integral relation between output spectra and intracavity squeezing.

With δ(ω + ω') pairing and symmetric 1/√(2π) Fourier transforms the
intracavity normally ordered variance is

    S_X'c = SPECTRAL_NORMALIZATION / μ_ext · ∫ S_out(ω) dω

with SPECTRAL_NORMALIZATION = 1/(2π).

``calibrate_normalization`` recovers the constant from the moment solver.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy import integrate

from ..constants import SPECTRAL_NORMALIZATION
from ..errors import GridSpanError, ParameterError
from ..model.drift import build_drift
from ..model.drive import DriveMode
from ..params.types import EffectiveParams
from ..steadystate.moments import solve_steady_moments
from ..steadystate.squeezing import quadrature_squeezing
from .output import output_correlations
from .types import SpectrumResult

logger = logging.getLogger(__name__)

TAIL_FRACTION_LIMIT = 1e-3
CALIBRATION_AGREEMENT = 1e-6


def kappa_norm() -> float:
    """The frozen integral normalisation constant."""
    return SPECTRAL_NORMALIZATION


def _tail(omega_edge: float, value: float) -> float:
    # ∫_W^∞ S(W) (W/ω)^4 dω
    return value * abs(omega_edge) / 3.0


def integrate_spectrum(spec: SpectrumResult, quadrature: str = "squeezed") -> float:
    """Intracavity quadrature variance from an output spectrum.

    Trapezoid rule on the grid plus an ω⁻⁴ tail beyond each end.

    Args:
        spec: Output spectrum without amplifier noise
        quadrature: ``"squeezed"`` or ``"antisqueezed"``

    Returns:
        S_X'c (or S_Y'c) at φ = θ

    Raises:
        GridSpanError: The tail estimate exceeds 0.1% of the total
    """
    if spec.amplifier is not None:
        raise ParameterError(
            "cannot integrate a spectrum that includes amplifier noise"
        )
    if quadrature == "squeezed":
        values = spec.S_squeezed
    elif quadrature == "antisqueezed":
        values = spec.S_antisqueezed
    else:
        raise ParameterError(f"unknown quadrature {quadrature!r}")

    omega = spec.omega
    body = float(integrate.trapezoid(values, omega))
    tail = _tail(omega[0], values[0]) + _tail(omega[-1], values[-1])
    total = body + tail

    limit = TAIL_FRACTION_LIMIT * abs(total)
    if abs(tail) > limit and abs(tail) > 1e-15 * (1 + abs(body)):
        span = max(-omega[0], omega[-1])
        if total == 0:
            required = 10.0 * span
        else:
            required = span * (abs(tail) / limit) ** (1.0 / 3.0)
        raise GridSpanError(
            f"tail holds {abs(tail) / max(abs(total), 1e-300):.2%} of the integral",
            required_span=required,
        )
    logger.debug("spectrum integral: body %.6g, tail %.3g", body, tail)
    return SPECTRAL_NORMALIZATION / spec.params.mu_ext * total


@dataclass(frozen=True)
class CalibrationResult:
    """Normalisation constants recovered on independent parameter sets."""

    constants: List[float]
    expected: float

    @property
    def spread(self) -> float:
        values = np.asarray(self.constants)
        return float((values.max() - values.min()) / abs(values.mean()))

    @property
    def consistent(self) -> bool:
        return self.spread <= CALIBRATION_AGREEMENT

    @property
    def matches_frozen(self) -> bool:
        return all(
            abs(c - self.expected) <= CALIBRATION_AGREEMENT * abs(self.expected)
            for c in self.constants
        )


def _adaptive_integral(params: EffectiveParams, mode: DriveMode, theta: float) -> float:
    model = build_drift(params, mode)
    mu = params.mu

    def integrand(x: float) -> float:
        corr = output_correlations(model, np.array([x * mu]))
        phase = np.exp(-2j * theta) * corr.aa[0] + np.exp(2j * theta) * corr.adad[0]
        return float((phase + 2.0 * corr.ada[0]).real)

    # features sit near 0, ±g/μ and within the mechanical linewidth
    g_scaled = params.g / mu
    points = sorted({0.0, g_scaled, -g_scaled, 0.5, -0.5})
    points = [p for p in points if -50.0 < p < 50.0]
    middle, _ = integrate.quad(
        integrand, -50.0, 50.0, points=points, limit=500, epsabs=0, epsrel=1e-10
    )
    tails = {"limit": 200, "epsabs": 0, "epsrel": 1e-10}
    upper, _ = integrate.quad(integrand, 50.0, np.inf, **tails)
    lower, _ = integrate.quad(integrand, -np.inf, -50.0, **tails)
    return mu * (middle + upper + lower)


def calibrate_normalization(
    cases: Sequence[EffectiveParams], mode: DriveMode, theta: float
) -> CalibrationResult:
    """Recover the integral normalisation from the moment solver.

    For every parameter set the constant is μ_ext·S_X'c / ∫S_out dω, with the
    integral done by adaptive quadrature.

    Args:
        cases: Parameter sets with non-zero intracavity squeezing
        mode: Drive configuration
        theta: Quadrature angle used for both sides

    Returns:
        One constant per parameter set
    """
    constants = []
    for params in cases:
        moments = solve_steady_moments(build_drift(params, mode))
        S_Xc = quadrature_squeezing(moments.cavity, theta).S_X
        integral = _adaptive_integral(params, mode, theta)
        if integral == 0:
            raise ParameterError(
                "calibration needs parameters with a non-zero spectrum"
            )
        constants.append(params.mu_ext * S_Xc / integral)
        logger.info("calibration case %s: constant %.12g", params, constants[-1])
    return CalibrationResult(constants=constants, expected=SPECTRAL_NORMALIZATION)
