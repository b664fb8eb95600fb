"""Nanoresonator master equations with the cavity adiabatically eliminated.

The cavity contributes one extra dissipator at rate Γ = 4g²/μ:

* red: Γ 𝒟[b] (cooling)
* blue: Γ 𝒟[b†] (heating)
* blue and red: 2Γ 𝒟[b e^{-iψ} + b† e^{iψ}] (single-quadrature diffusion)
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import qutip

from ..errors import InstabilityError, ParameterError, TruncationError
from ..model.drive import DriveKind, DriveMode
from ..params.derivation import cooling_rate
from ..params.types import EffectiveParams
from ..steadystate.moments import ModeMoments
from ..steadystate.phonons import final_phonon_number
from ..steadystate.squeezing import QuadratureSqueezing, optimal_quadrature
from .fock import (
    ESCALATION_FACTOR,
    TOP_LEVEL_LIMIT,
    FockConfig,
    estimate_levels,
    parametric_hamiltonian,
)

logger = logging.getLogger(__name__)

ADIABATIC_LIMIT = 0.1


@dataclass(frozen=True, eq=False)
class ReducedResult:
    """Steady state of the mechanics-only master equation."""

    moments: ModeMoments
    squeezing: QuadratureSqueezing
    rho: qutip.Qobj
    n_mech: int
    top_population: float

    @property
    def bdb(self) -> float:
        return self.moments.number


def reduced_collapse_operators(
    params: EffectiveParams, mode: DriveMode, b: qutip.Qobj
) -> List[qutip.Qobj]:
    """Thermal bath plus the cavity-induced dissipator, rates in units of μ."""
    gamma = params.gamma / params.mu
    rate = cooling_rate(params.g, params.mu) / params.mu
    c_ops = [math.sqrt(gamma * (params.n_m0 + 1)) * b]
    if params.n_m0 > 0:
        c_ops.append(math.sqrt(gamma * params.n_m0) * b.dag())
    if rate > 0:
        if mode.kind is DriveKind.RED:
            c_ops.append(math.sqrt(rate) * b)
        elif mode.kind is DriveKind.BLUE:
            c_ops.append(math.sqrt(rate) * b.dag())
        else:
            quadrature = b * np.exp(-1j * mode.psi) + b.dag() * np.exp(1j * mode.psi)
            c_ops.append(math.sqrt(2 * rate) * quadrature)
    return c_ops


def _solve(params: EffectiveParams, mode: DriveMode, n_mech: int) -> ReducedResult:
    b = qutip.destroy(n_mech)
    H = parametric_hamiltonian(params.chi / params.mu, b)
    rho = qutip.steadystate(H, reduced_collapse_operators(params, mode, b))
    rho = 0.5 * (rho + rho.dag())
    moments = ModeMoments(
        square=complex(qutip.expect(b * b, rho)),
        number=float(np.real(qutip.expect(b.dag() * b, rho))),
    )
    return ReducedResult(
        moments=moments,
        squeezing=optimal_quadrature(moments),
        rho=rho,
        n_mech=n_mech,
        top_population=float(np.real(rho.diag()[-1])),
    )


def reduced_me_steady(
    params: EffectiveParams, mode: DriveMode, cfg: Optional[FockConfig] = None
) -> ReducedResult:
    """Steady state of the adiabatically eliminated master equation.

    Args:
        params: Effective parameters in the adiabatic regime (ε ≤ 0.1)
        mode: Drive configuration
        cfg: Only ``n_mech``, ``auto_truncation`` and ``escalate`` are used

    Returns:
        Mechanical moments and the best quadrature variance

    Raises:
        ParameterError: Outside the adiabatic regime
        InstabilityError: Blue drive with Γ ≥ γ
        TruncationError: The truncation is still inadequate after escalation
    """
    cfg = cfg or FockConfig()
    if params.epsilon > ADIABATIC_LIMIT:
        raise ParameterError(
            f"reduced master equation needs epsilon <= {ADIABATIC_LIMIT}, "
            f"got {params.epsilon:.3g}"
        )
    rate = cooling_rate(params.g, params.mu)
    if mode.kind is DriveKind.BLUE and rate >= params.gamma:
        raise InstabilityError(
            f"blue-sideband instability: Gamma = {rate:.6g}"
            f" >= gamma = {params.gamma:.6g}",
            condition="4 g^2/mu < gamma",
        )

    n_mech = cfg.n_mech
    if cfg.auto_truncation:
        expected = final_phonon_number(params.with_updates(chi=0.0), mode)
        n_mech = max(n_mech, estimate_levels(expected))

    result = _solve(params, mode, n_mech)
    if result.top_population >= TOP_LEVEL_LIMIT and cfg.escalate:
        logger.info("escalating reduced truncation from %d levels", n_mech)
        result = _solve(params, mode, int(math.ceil(n_mech * ESCALATION_FACTOR)))
    if result.top_population >= TOP_LEVEL_LIMIT:
        raise TruncationError(
            f"top Fock level of mechanics holds {result.top_population:.3e}",
            mode="mechanics",
        )
    return result
