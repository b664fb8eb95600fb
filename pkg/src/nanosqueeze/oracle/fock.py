"""Truncated Fock-space master equation for the cavity and nanoresonator.

The effective Hamiltonians are quadratic, so the exact steady state is
Gaussian and must agree with the moment solver. Rates are expressed in
units of μ before they reach qutip.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np
import qutip

from ..errors import InstabilityError, ParameterError, TruncationError
from ..model.drift import build_drift
from ..model.drive import DriveKind, DriveMode
from ..model.stability import stability
from ..params.types import EffectiveParams
from ..steadystate.moments import MomentState, solve_steady_moments

logger = logging.getLogger(__name__)

TOP_LEVEL_LIMIT = 1e-6
DIRECT_SOLVE_MAX_DIM = 400
ESCALATION_FACTOR = 1.5


@dataclass(frozen=True)
class FockConfig:
    """Truncation and solver settings.

    Attributes:
        n_cav: Cavity Fock dimension
        n_mech: Nanoresonator Fock dimension
        solver_tol: Relative moment drift tolerance for time integration
        max_time: Integration limit in units of the slowest relaxation time
        auto_truncation: Raise n_mech to the estimate from the Gaussian moments
        escalate: Retry once with 1.5× the overflowing dimension
    """

    n_cav: int = 6
    n_mech: int = 12
    solver_tol: float = 1e-6
    max_time: float = 200.0
    auto_truncation: bool = True
    escalate: bool = True

    def __post_init__(self):
        if self.n_cav < 2:
            raise ParameterError(f"n_cav must be >= 2, got {self.n_cav}")
        if self.n_mech < 4:
            raise ParameterError(f"n_mech must be >= 4, got {self.n_mech}")
        if not self.solver_tol > 0:
            raise ParameterError(f"solver_tol must be positive, got {self.solver_tol}")
        if not self.max_time > 0:
            raise ParameterError(f"max_time must be positive, got {self.max_time}")

    @property
    def dimension(self) -> int:
        return self.n_cav * self.n_mech


@dataclass(frozen=True, eq=False)
class FockResult:
    """Steady state of the full master equation.

    Attributes:
        moments: Second moments extracted from the density matrix
        rho: Density matrix over cavity ⊗ nanoresonator
        n_cav: Cavity truncation used
        n_mech: Nanoresonator truncation used
        method: ``"direct"`` or ``"integrate"``
        top_populations: Population of the highest Fock level of each mode
        trace_error: |Tr ρ - 1|
        min_eigenvalue: Smallest eigenvalue of ρ
    """

    moments: MomentState
    rho: qutip.Qobj
    n_cav: int
    n_mech: int
    method: str
    top_populations: Tuple[float, float]
    trace_error: float
    min_eigenvalue: float


def mode_operators(n_cav: int, n_mech: int) -> Tuple[qutip.Qobj, qutip.Qobj]:
    a = qutip.tensor(qutip.destroy(n_cav), qutip.qeye(n_mech))
    b = qutip.tensor(qutip.qeye(n_cav), qutip.destroy(n_mech))
    return a, b


def parametric_hamiltonian(chi: complex, b: qutip.Qobj) -> qutip.Qobj:
    return np.conj(chi) * b * b + chi * b.dag() * b.dag()


def effective_hamiltonian(
    params: EffectiveParams, mode: DriveMode, a: qutip.Qobj, b: qutip.Qobj
) -> qutip.Qobj:
    """Rotating-frame Hamiltonian in units of μ.

    The red-sideband beamsplitter carries a minus sign so that the Heisenberg
    equations reproduce the drift matrix entry for entry.
    """
    g = params.g / params.mu
    H = parametric_hamiltonian(params.chi / params.mu, b)
    if mode.kind is DriveKind.BLUE:
        H += g * (a * b + a.dag() * b.dag())
    elif mode.kind is DriveKind.RED:
        H += -g * (a.dag() * b + a * b.dag())
    else:
        quadrature = b * np.exp(-1j * mode.psi) + b.dag() * np.exp(1j * mode.psi)
        H += g * (a + a.dag()) * quadrature
    return H


def collapse_operators(
    params: EffectiveParams, a: qutip.Qobj, b: qutip.Qobj
) -> List[qutip.Qobj]:
    """Cavity loss and the two-dissipator thermal bath, rates in units of μ."""
    gamma = params.gamma / params.mu
    c_ops = [a, math.sqrt(gamma * (params.n_m0 + 1)) * b]
    if params.n_m0 > 0:
        c_ops.append(math.sqrt(gamma * params.n_m0) * b.dag())
    return c_ops


def estimate_levels(occupation: float, squeezing: float = 0.0) -> int:
    """Fock levels for a top-level population below the acceptance limit.

    Uses a thermal tail with occupation ``occupation + squeezing``.
    """
    n_eff = max(occupation + squeezing, 1e-3)
    ratio = n_eff / (n_eff + 1)
    levels = 1 + math.log(TOP_LEVEL_LIMIT / 10 * (n_eff + 1)) / math.log(ratio)
    return max(4, int(math.ceil(levels)) + 1)


def top_level_population(rho: qutip.Qobj, subsystem: int) -> float:
    reduced = rho.ptrace(subsystem)
    return float(np.real(reduced.diag()[-1]))


def extract_moments(rho: qutip.Qobj, a: qutip.Qobj, b: qutip.Qobj) -> MomentState:
    def ev(op):
        return complex(qutip.expect(op, rho))

    return MomentState(
        a2=ev(a * a),
        ada=ev(a.dag() * a).real,
        b2=ev(b * b),
        bdb=ev(b.dag() * b).real,
        ab=ev(a * b),
        abd=ev(a * b.dag()),
        adb=ev(a.dag() * b),
        bd2=ev(b.dag() * b.dag()),
        ad2=ev(a.dag() * a.dag()),
        adbd=ev(a.dag() * b.dag()),
    )


def _slowest_rate(params: EffectiveParams, mode: DriveMode) -> float:
    eigenvalues = np.linalg.eigvals(build_drift(params, mode).M / params.mu)
    return float(np.min(np.abs(eigenvalues.real)))


def _relax(
    H: qutip.Qobj,
    c_ops: List[qutip.Qobj],
    rho: qutip.Qobj,
    a: qutip.Qobj,
    b: qutip.Qobj,
    chunk: float,
    cfg: FockConfig,
) -> qutip.Qobj:
    observables = [b.dag() * b, b * b, a.dag() * a]
    previous = np.array([qutip.expect(op, rho) for op in observables])
    elapsed = 0.0
    while elapsed < cfg.max_time * chunk:
        rho = qutip.mesolve(H, rho, [0.0, chunk], c_ops).states[-1]
        elapsed += chunk
        current = np.array([qutip.expect(op, rho) for op in observables])
        change = np.abs(current - previous) / np.maximum(1.0, np.abs(current))
        drift = float(np.max(change))
        logger.debug("relaxation t = %.3g: moment drift %.3e", elapsed, drift)
        if drift < cfg.solver_tol:
            return rho
        previous = current
    raise InstabilityError(
        f"moments still drifting after {elapsed:.3g} relaxation times",
        condition="time integration did not settle",
    )


def _solve_once(
    params: EffectiveParams,
    mode: DriveMode,
    cfg: FockConfig,
    method: str,
    initial_state: Optional[qutip.Qobj],
) -> FockResult:
    a, b = mode_operators(cfg.n_cav, cfg.n_mech)
    H = effective_hamiltonian(params, mode, a, b)
    c_ops = collapse_operators(params, a, b)

    if method == "auto":
        method = "direct" if cfg.dimension <= DIRECT_SOLVE_MAX_DIM else "integrate"
    if method == "direct":
        rho = qutip.steadystate(H, c_ops)
    elif method == "integrate":
        if initial_state is None:
            initial_state = qutip.tensor(
                qutip.fock_dm(cfg.n_cav, 0), qutip.fock_dm(cfg.n_mech, 0)
            )
        chunk = 1.0 / _slowest_rate(params, mode)
        rho = _relax(H, c_ops, initial_state, a, b, chunk, cfg)
    else:
        raise ParameterError(f"unknown steady-state method {method!r}")
    logger.debug("fock steady state %dx%d by %s", cfg.n_cav, cfg.n_mech, method)

    rho = 0.5 * (rho + rho.dag())
    eigenvalues = np.linalg.eigvalsh(rho.full())
    return FockResult(
        moments=extract_moments(rho, a, b),
        rho=rho,
        n_cav=cfg.n_cav,
        n_mech=cfg.n_mech,
        method=method,
        top_populations=(top_level_population(rho, 0), top_level_population(rho, 1)),
        trace_error=abs(float(np.real(rho.tr())) - 1.0),
        min_eigenvalue=float(eigenvalues[0]),
    )


def full_me_steady(
    params: EffectiveParams,
    mode: DriveMode,
    cfg: Optional[FockConfig] = None,
    method: str = "auto",
    initial_state: Optional[qutip.Qobj] = None,
) -> FockResult:
    """Steady state of the cavity-nanoresonator master equation.

    Small problems use qutip's direct steady-state solver; larger ones are
    integrated until the moments stop drifting. The truncation is accepted
    only if the highest Fock level of each mode holds less than 1e-6 of the
    population; otherwise the overflowing dimension is raised once.

    Args:
        params: Effective parameters
        mode: Drive configuration
        cfg: Truncation and solver settings
        method: ``"auto"``, ``"direct"`` or ``"integrate"``
        initial_state: Starting density matrix for integration

    Returns:
        Steady state with extracted moments

    Raises:
        InstabilityError: The linear model has no steady state
        TruncationError: The truncation is still inadequate after escalation
    """
    cfg = cfg or FockConfig()
    report = stability(params, mode)
    if not report.stable:
        raise InstabilityError(
            f"no steady state for {mode.label}: " + "; ".join(report.violated()),
            condition="; ".join(report.violated()),
        )

    if cfg.auto_truncation and initial_state is None:
        gaussian = solve_steady_moments(build_drift(params, mode))
        mech = estimate_levels(gaussian.bdb, abs(gaussian.b2))
        cav = estimate_levels(gaussian.ada, abs(gaussian.a2))
        cfg = replace(cfg, n_mech=max(cfg.n_mech, mech), n_cav=max(cfg.n_cav, cav))

    result = _solve_once(params, mode, cfg, method, initial_state)
    overflow = [
        name
        for name, population in zip(("cavity", "mechanics"), result.top_populations)
        if population >= TOP_LEVEL_LIMIT
    ]
    if not overflow:
        return result
    if not cfg.escalate or initial_state is not None:
        raise TruncationError(
            f"top Fock level of {overflow[0]} holds {max(result.top_populations):.3e}",
            mode=overflow[0],
        )

    logger.info("escalating Fock truncation for %s", ", ".join(overflow))
    n_cav, n_mech = cfg.n_cav, cfg.n_mech
    if "cavity" in overflow:
        n_cav = int(math.ceil(n_cav * ESCALATION_FACTOR))
    if "mechanics" in overflow:
        n_mech = int(math.ceil(n_mech * ESCALATION_FACTOR))
    bigger = replace(cfg, n_cav=n_cav, n_mech=n_mech)
    result = _solve_once(params, mode, bigger, method, None)
    for name, population in zip(("cavity", "mechanics"), result.top_populations):
        if population >= TOP_LEVEL_LIMIT:
            raise TruncationError(
                f"top Fock level of {name} holds {population:.3e} after escalation",
                mode=name,
            )
    return result


def gaussianity_residual(rho: qutip.Qobj, op: qutip.Qobj) -> float:
    """Deviation of <c†²c²> from its Wick value 2<c†c>² + |<c²>|²."""
    fourth = complex(qutip.expect(op.dag() * op.dag() * op * op, rho)).real
    number = complex(qutip.expect(op.dag() * op, rho)).real
    square = complex(qutip.expect(op * op, rho))
    return abs(fourth - (2 * number**2 + abs(square) ** 2))


def mixed_test_state(n_cav: int, n_mech: int) -> qutip.Qobj:
    """Hermitian trace-one state with coherences in both modes."""
    coherent = qutip.tensor(qutip.coherent(n_cav, 0.3), qutip.coherent(n_mech, 0.5j))
    thermal = qutip.tensor(qutip.thermal_dm(n_cav, 0.2), qutip.thermal_dm(n_mech, 0.7))
    return 0.5 * qutip.ket2dm(coherent) + 0.5 * thermal


def liouvillian_trace_residual(
    params: EffectiveParams,
    mode: DriveMode,
    cfg: Optional[FockConfig] = None,
    rho: Optional[qutip.Qobj] = None,
) -> float:
    """|Tr(L ρ)| for the master-equation generator; zero up to rounding."""
    cfg = cfg or FockConfig()
    a, b = mode_operators(cfg.n_cav, cfg.n_mech)
    H = effective_hamiltonian(params, mode, a, b)
    L = qutip.liouvillian(H, collapse_operators(params, a, b))
    if rho is None:
        rho = mixed_test_state(cfg.n_cav, cfg.n_mech)
    generated = qutip.vector_to_operator(L * qutip.operator_to_vector(rho))
    return abs(complex(generated.tr()))
