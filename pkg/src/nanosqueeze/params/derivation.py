"""Physical-to-effective parameter derivation.

Every function here is a closed-form conversion from lab quantities to the
rates used by the model. Inputs and outputs are SI, angular frequencies in
rad/s.
"""

import logging
import math

import numpy as np

from ..constants import HBAR, K_B
from ..errors import ParameterError
from .types import EffectiveParams, PhysicalParams

logger = logging.getLogger(__name__)


def _require_positive(**values: float) -> None:
    bad = [name for name, value in values.items() if not value > 0]
    if bad:
        raise ParameterError(f"must be strictly positive: {', '.join(bad)}")


def _require_nonnegative(**values: float) -> None:
    bad = [name for name, value in values.items() if value < 0]
    if bad:
        raise ParameterError(f"must be non-negative: {', '.join(bad)}")


def zero_point_width(mass: float, nu: float) -> float:
    """Half-width of the nanoresonator ground state, Δx = sqrt(ħ/(2 m ν)).

    Args:
        mass: Nanoresonator mass (kg)
        nu: Mechanical angular frequency (rad/s)

    Returns:
        Δx in metres
    """
    _require_positive(mass=mass, nu=nu)
    return math.sqrt(HBAR / (2.0 * mass * nu))


def derive_kappa(beta: float, omega_c: float, delta_x: float, d: float) -> float:
    """Single-phonon frequency pull κ = β ω_c Δx / (2d).

    Logs a warning when Δx is not small compared with the gap, since the
    linearised capacitive coupling no longer applies.

    Args:
        beta: Capacitance ratio C0/CΣ
        omega_c: Cavity angular frequency (rad/s)
        delta_x: Zero-point width (m)
        d: Equilibrium gap (m)

    Returns:
        κ in 1/s
    """
    _require_positive(beta=beta, omega_c=omega_c, delta_x=delta_x, d=d)
    if delta_x >= d:
        logger.warning(
            "zero-point width %.3g m is not small compared with the gap %.3g m; "
            "the linearised coupling is invalid",
            delta_x,
            d,
        )
    return beta * omega_c * delta_x / (2.0 * d)


def derive_g(kappa: float, E_drive: float, nu: float) -> float:
    """Effective coupling g = κ 𝓔/ν (identical for every sideband drive)."""
    _require_positive(kappa=kappa, nu=nu)
    _require_nonnegative(E_drive=E_drive)
    return kappa * E_drive / nu


def parametric_spring_amplitude(
    C_c0: float, V0: float, VP: float, x_c0: float
) -> float:
    """Amplitude k_0 = C_c0 V0 VP / x_c0² of the modulated spring constant (kg/s²)."""
    _require_positive(C_c0=C_c0, x_c0=x_c0)
    _require_nonnegative(V0=V0, VP=VP)
    return C_c0 * V0 * VP / x_c0**2


def derive_chi(
    C_c0: float, V0: float, VP: float, x_c0: float, mass: float, nu: float
) -> float:
    """Parametric drive strength |χ| = k_0 / (8 m ν).

    Args:
        C_c0: Pump-electrode capacitance (F)
        V0: Static electrode voltage (V)
        VP: Pump amplitude (V)
        x_c0: Pump-electrode gap (m)
        mass: Nanoresonator mass (kg)
        nu: Mechanical angular frequency (rad/s)

    Returns:
        |χ| in 1/s
    """
    _require_positive(mass=mass, nu=nu)
    k0 = parametric_spring_amplitude(C_c0, V0, VP, x_c0)
    return k0 / (8.0 * mass * nu)


def required_pump_product(
    chi: float, C_c0: float, x_c0: float, mass: float, nu: float
) -> float:
    """Voltage product V0·VP that produces a parametric strength ``chi`` (V²)."""
    _require_positive(C_c0=C_c0, x_c0=x_c0, mass=mass, nu=nu)
    _require_nonnegative(chi=chi)
    return 8.0 * mass * nu * chi * x_c0**2 / C_c0


def spring_constant_change(k0: float, mass: float, nu: float) -> float:
    """Fractional change k_0/(m ν²) of the unperturbed spring constant."""
    _require_positive(mass=mass, nu=nu)
    return k0 / (mass * nu**2)


def drive_photon_number(E_drive: float, nu: float) -> float:
    """Photon number at the drive frequency, n_d = (𝓔/ν)²."""
    _require_positive(nu=nu)
    _require_nonnegative(E_drive=E_drive)
    return (E_drive / nu) ** 2


def circulating_power(n_d: float, omega_c: float) -> float:
    """Circulating power P = n_d ħ ω_c² (W).

    This convention is the one that yields 1.87 μW on the fiducial device; it
    is flagged as convention-dependent in feasibility reports.
    """
    _require_nonnegative(n_d=n_d)
    _require_positive(omega_c=omega_c)
    return n_d * HBAR * omega_c**2


def decay_rate_from_q(omega: float, quality_factor: float) -> float:
    """Energy decay rate ω/Q (1/s)."""
    _require_positive(omega=omega, quality_factor=quality_factor)
    return omega / quality_factor


def thermal_occupation(nu: float, T_m: float) -> float:
    """Bose-Einstein occupation 1/(exp(ħν/k T) - 1); zero at T = 0."""
    _require_positive(nu=nu)
    _require_nonnegative(T_m=T_m)
    if T_m == 0.0:
        return 0.0
    x = HBAR * nu / (K_B * T_m)
    if x > 700.0:
        return 0.0
    return float(1.0 / np.expm1(x))


def cooling_rate(g: float, mu: float) -> float:
    """Cavity-induced mechanical rate Γ = 4g²/μ."""
    _require_positive(mu=mu)
    _require_nonnegative(g=g)
    return 4.0 * g**2 / mu


def derive_effective(p: PhysicalParams, mu_int: float = 0.0) -> EffectiveParams:
    """Run the whole derivation chain on a device description.

    μ_ext = ω_c/Q_cavity (minus any internal loss supplied separately),
    γ = ν/Q_mech, g from κ and the drive, χ real and positive from the pump
    electrode, n_m0 from the bath temperature.

    Args:
        p: Device parameters
        mu_int: Internal cavity loss (1/s) to split off the total damping

    Returns:
        Effective model parameters
    """
    delta_x = zero_point_width(p.mass, p.nu)
    kappa = derive_kappa(p.beta, p.omega_c, delta_x, p.d)
    mu_total = decay_rate_from_q(p.omega_c, p.Q_cavity)
    if mu_int >= mu_total:
        raise ParameterError(
            f"internal loss {mu_int:.6g} 1/s exceeds total damping {mu_total:.6g} 1/s"
        )
    effective = EffectiveParams(
        g=derive_g(kappa, p.E_drive, p.nu),
        chi=derive_chi(p.C_c0, p.V0, p.VP, p.x_c0, p.mass, p.nu),
        gamma=decay_rate_from_q(p.nu, p.Q_mech),
        mu_ext=mu_total - mu_int,
        mu_int=mu_int,
        n_m0=thermal_occupation(p.nu, p.T_m),
    )
    logger.debug("derived %s from %s", effective, p)
    return effective
