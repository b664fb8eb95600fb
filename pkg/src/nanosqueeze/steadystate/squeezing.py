"""Quadrature squeezing of the steady state.

Normally ordered quadrature variances of a mode with moments <b²>, <b†b>:

    S_X(φ) = e^{-2iφ}<b²> + e^{2iφ}<b†²> + 2<b†b>
    S_Y(φ) = -e^{-2iφ}<b²> - e^{2iφ}<b†²> + 2<b†b>

The same expressions apply to the cavity with b replaced by a.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from ..errors import InstabilityError, ParameterError
from ..model.drift import build_drift
from ..model.drive import DriveKind, DriveMode
from ..model.stability import stability
from ..params.types import EffectiveParams
from .moments import ModeMoments, solve_steady_moments

PHASE_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureSqueezing:
    """Normally ordered variances of the rotated quadratures X'(φ), Y'(φ)."""

    S_X: float
    S_Y: float
    phi: float

    @property
    def uncertainty_product(self) -> float:
        """(S_X + 1)(S_Y + 1), at least 1 for any physical state."""
        return (self.S_X + 1.0) * (self.S_Y + 1.0)


@dataclass(frozen=True)
class OptimalPhases:
    phi: float
    theta: float
    psi: Optional[float] = None


@dataclass(frozen=True)
class CavityRelationReport:
    """Red-sideband link between nanoresonator and intracavity squeezing.

    Attributes:
        S_Ym: Nanoresonator Y'_m variance at φ = -π/4
        S_Xc: Intracavity X'_c variance at φ = -π/4
        correction: 2μ(n γ - 2χ)/(4g² + γμ + 4μχ)
        residual: S_Ym - (S_Xc + correction)
        bath_bound: (4g² + γμ)/(2γμ)
        bath_condition: n_m0 below the bound
        bath_marginal: n_m0 equal to the bound within rounding
    """

    S_Ym: float
    S_Xc: float
    correction: float
    residual: float
    bath_bound: float
    bath_condition: bool
    bath_marginal: bool


def wrap_half_turn(angle: float) -> float:
    """Map a quadrature angle into (-π/2, π/2]; quadratures repeat every π."""
    turned = math.fmod(math.pi / 2 - angle, math.pi) + math.pi
    return math.pi / 2 - math.fmod(turned, math.pi)


def quadrature_squeezing(moments: ModeMoments, phi: float) -> QuadratureSqueezing:
    """Both quadrature variances of one mode at rotation angle ``phi``.

    Args:
        moments: <b²> and <b†b> (or the cavity pair)
        phi: Quadrature rotation angle in radians

    Returns:
        Variances S_X, S_Y

    Example:
        >>> quadrature_squeezing(ModeMoments(square=-0.1, number=0.2), 0.0)
        QuadratureSqueezing(S_X=0.2..., S_Y=0.6..., phi=0.0)
    """
    phase_term = 2.0 * (cmath.exp(-2j * phi) * moments.square).real
    number_term = 2.0 * moments.number
    return QuadratureSqueezing(
        S_X=number_term + phase_term,
        S_Y=number_term - phase_term,
        phi=phi,
    )


def optimal_quadrature(moments: ModeMoments) -> QuadratureSqueezing:
    """Quadrature with the smallest variance.

    The minimum over φ of S_X(φ) is 2<b†b> - 2|<b²>|, reached at
    φ = (arg<b²> - π)/2.
    """
    magnitude = abs(moments.square)
    phi = wrap_half_turn((cmath.phase(moments.square) - math.pi) / 2.0)
    return QuadratureSqueezing(
        S_X=2.0 * moments.number - 2.0 * magnitude,
        S_Y=2.0 * moments.number + 2.0 * magnitude,
        phi=phi,
    )


def optimal_phases(mode: DriveMode, arg_chi: float = 0.0) -> OptimalPhases:
    """Quadrature, local-oscillator and relative-drive phases for best squeezing.

    For real χ the squeezed nanoresonator quadrature is Y'_m at φ = -π/4; the
    output is detected at θ = -π/4 on a single sideband and θ = 0 with two
    drives at ψ = π/4. A pump phase rotates the optimum by half its value.

    Args:
        mode: Drive configuration
        arg_chi: Phase of the parametric drive χ

    Returns:
        The phases, each wrapped into (-π/2, π/2]; ``psi`` only for two drives
    """
    phi = wrap_half_turn(-math.pi / 4 + arg_chi / 2)
    if mode.kind is DriveKind.RED:
        theta = wrap_half_turn(-math.pi / 4 + arg_chi / 2)
        return OptimalPhases(phi=phi, theta=theta)
    if mode.kind is DriveKind.BLUE:
        theta = wrap_half_turn(-math.pi / 4 - arg_chi / 2)
        return OptimalPhases(phi=phi, theta=theta)
    psi = wrap_half_turn(math.pi / 4 + arg_chi / 2)
    return OptimalPhases(phi=phi, theta=0.0, psi=psi)


def _require_below_threshold(params: EffectiveParams, mode: DriveMode) -> None:
    report = stability(params, mode)
    if not report.analytic_pass:
        labels = [c.label for c in report.analytic_margins if not c.passed]
        raise InstabilityError(
            f"{mode.label} is at or above threshold: " + "; ".join(labels),
            condition="; ".join(labels),
        )


def closed_form_SYm(params: EffectiveParams, mode: DriveMode) -> float:
    """Closed-form squeezed nanoresonator variance S_Y'm for real χ.

    Args:
        params: Effective parameters with real χ
        mode: Drive configuration; two-sideband drives need ψ = π/4 (mod π)

    Returns:
        S_Y'm at φ = -π/4

    Raises:
        ParameterError: χ is complex, or ψ is not π/4
        InstabilityError: At or above threshold
    """
    if not params.chi_is_real:
        raise ParameterError(
            "closed forms assume real chi; rotate the quadrature instead"
        )
    _require_below_threshold(params, mode)

    g2 = params.g**2
    chi = params.chi.real
    gamma = params.gamma
    mu = params.mu
    n = params.n_m0

    if mode.kind is DriveKind.BLUE:
        numerator = mu * (n * gamma - 2 * chi) * (gamma + mu + 4 * chi) - 4 * g2 * (
            n * gamma - mu - 2 * chi
        )
        denominator = (gamma + mu + 4 * chi) * (mu * gamma + 4 * mu * chi - 4 * g2)
        return 2.0 * numerator / denominator

    if mode.kind is DriveKind.RED:
        numerator = (n * gamma - 2 * chi) * (4 * g2 + mu * gamma + mu**2 + 4 * mu * chi)
        denominator = (gamma + mu + 4 * chi) * (4 * g2 + mu * gamma + 4 * mu * chi)
        return 2.0 * numerator / denominator

    offset = math.fmod(mode.psi - math.pi / 4, math.pi)
    if min(abs(offset), math.pi - abs(offset)) > PHASE_TOL:
        raise ParameterError(
            f"two-sideband closed form needs psi = pi/4 mod pi, got {mode.psi}"
        )
    return (2 * n * gamma - 4 * chi) / (gamma + 4 * chi)


def red_threshold_SYm(params: EffectiveParams) -> float:
    """Red-sideband S_Y'm evaluated at the parametric threshold.

    Uses χ = g²/μ + γ/4; χ in ``params`` is ignored. Valid only when 4g² < μ².
    """
    g2 = params.g**2
    gamma = params.gamma
    mu = params.mu
    n = params.n_m0
    if not 4 * g2 < mu**2:
        raise ParameterError("the at-threshold closed form needs 4 g^2 < mu^2")
    common = 8 * g2 + 2 * gamma * mu + mu**2
    base = 4 * g2 + 2 * gamma * mu + mu**2
    thermal = n * gamma * mu * common / ((4 * g2 + gamma * mu) * base)
    return -0.5 * common / base + thermal


def cavity_nanores_relation_check(params: EffectiveParams) -> CavityRelationReport:
    """Compare red-sideband nanoresonator and intracavity squeezing.

    Both sides are taken from the moment solver; the residual should vanish
    to solver precision.
    """
    if not params.chi_is_real:
        raise ParameterError("the cavity relation assumes real chi")
    mode = DriveMode.red()
    moments = solve_steady_moments(build_drift(params, mode))
    phi = -math.pi / 4
    S_Ym = quadrature_squeezing(moments.mechanics, phi).S_Y
    S_Xc = quadrature_squeezing(moments.cavity, phi).S_X

    g2 = params.g**2
    chi = params.chi.real
    gamma = params.gamma
    mu = params.mu
    n = params.n_m0
    correction = 2 * mu * (n * gamma - 2 * chi) / (4 * g2 + gamma * mu + 4 * mu * chi)

    bound = (4 * g2 + gamma * mu) / (2 * gamma * mu)
    marginal = math.isclose(n, bound, rel_tol=1e-9)
    return CavityRelationReport(
        S_Ym=S_Ym,
        S_Xc=S_Xc,
        correction=correction,
        residual=S_Ym - (S_Xc + correction),
        bath_bound=bound,
        bath_condition=n < bound and not marginal,
        bath_marginal=marginal,
    )
