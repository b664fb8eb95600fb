"""Zero-temperature closed-form output spectra for real χ."""

import math
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import InstabilityError, ParameterError
from ..model.drive import DriveKind, DriveMode
from ..model.stability import stability
from ..params.types import EffectiveParams

ArrayLike = Union[float, np.ndarray]


def closed_form_spectrum(
    params: EffectiveParams, mode: DriveMode, omega: ArrayLike
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Rational-function spectra at the optimal local-oscillator phase.

    Blue and red drives give only the squeezed spectrum; the two-sideband
    drive also gives the anti-squeezed one (its squeezed spectrum is zero).

    Args:
        params: Effective parameters with real χ, n_m0 = 0 and no internal loss
        mode: Drive configuration; two drives need ψ = π/4 (mod π)
        omega: Frequencies (rad/s)

    Returns:
        ``(S_s, S_as)`` with ``S_as`` None for single-sideband drives

    Raises:
        ParameterError: Finite temperature, complex χ, internal loss or wrong ψ
        InstabilityError: At or above threshold
    """
    if params.n_m0 != 0:
        raise ParameterError("closed-form spectra are zero-temperature only (n_m0 = 0)")
    if not params.chi_is_real:
        raise ParameterError("closed-form spectra assume real chi")
    if params.mu_int != 0:
        raise ParameterError("closed-form spectra assume no internal cavity loss")
    report = stability(params, mode)
    if not report.analytic_pass:
        raise InstabilityError(
            f"{mode.label} is at or above threshold",
            condition="; ".join(report.violated()),
        )

    w2 = np.asarray(omega, dtype=float) ** 2
    g2 = params.g**2
    chi = params.chi.real
    gamma = params.gamma
    mu = params.mu

    if mode.kind is DriveKind.BLUE:
        numerator = 32 * g2 * mu * (gamma - 2 * chi)
        denominator = (
            (4 * g2 - gamma * mu + 4 * mu * chi) ** 2
            + 4 * (8 * g2 + mu**2 + (gamma - 4 * chi) ** 2) * w2
            + 16 * w2**2
        )
        return numerator / denominator, None

    if mode.kind is DriveKind.RED:
        numerator = -64 * g2 * mu * chi
        denominator = (
            (4 * g2 + gamma * mu + 4 * mu * chi) ** 2
            + 4 * (-8 * g2 + mu**2 + (gamma + 4 * chi) ** 2) * w2
            + 16 * w2**2
        )
        return numerator / denominator, None

    offset = math.fmod(mode.psi - math.pi / 4, math.pi)
    if min(abs(offset), math.pi - abs(offset)) > 1e-12:
        raise ParameterError(
            f"two-sideband closed form needs psi = pi/4 mod pi, got {mode.psi}"
        )
    denominator = (mu**2 + 4 * w2) * ((gamma + 4 * chi) ** 2 + 4 * w2)
    antisqueezed = 64 * g2 * gamma * mu / denominator
    return np.zeros_like(w2), antisqueezed
