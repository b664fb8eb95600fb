"""Final mechanical occupations after adiabatic elimination of the cavity."""

import logging

from ..errors import InstabilityError
from ..model.drive import DriveKind, DriveMode
from ..params.derivation import cooling_rate
from ..params.types import EffectiveParams

logger = logging.getLogger(__name__)


def final_phonon_number(params: EffectiveParams, mode: DriveMode) -> float:
    """Mean phonon number predicted by the reduced master equations.

    χ is taken as zero. With Γ = 4g²/μ:

    * red: γ n⁰/(Γ + γ)
    * blue: (Γ + γ n⁰)/(γ - Γ), only for Γ < γ
    * blue and red: n⁰ + 2Γ/γ

    Args:
        params: Effective parameters
        mode: Drive configuration

    Returns:
        Steady-state <b†b>

    Raises:
        InstabilityError: Blue drive with Γ ≥ γ
    """
    if params.chi != 0:
        logger.debug("final_phonon_number ignores chi = %s", params.chi)
    rate = cooling_rate(params.g, params.mu)
    gamma = params.gamma
    n0 = params.n_m0

    if mode.kind is DriveKind.RED:
        return gamma * n0 / (rate + gamma)
    if mode.kind is DriveKind.BLUE:
        if rate >= gamma:
            raise InstabilityError(
                f"blue-sideband instability: Gamma = {rate:.6g} >= gamma = {gamma:.6g}",
                condition="4 g^2/mu < gamma",
            )
        return (rate + gamma * n0) / (gamma - rate)
    return n0 + 2.0 * rate / gamma
