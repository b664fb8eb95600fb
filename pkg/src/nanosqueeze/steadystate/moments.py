"""Steady-state second moments of the cavity and nanoresonator.

The moment equations are generated from the drift model rather than written
out per drive mode. With ``Σ[j, k] = <x_j x_k>`` for ``x = [a, a†, b, b†]``
the Langevin equations give

    dΣ/dt = M Σ + Σ Mᵀ + B C_in Bᵀ

so the steady state solves a 16-dimensional linear system. The system is
factorised with complete pivoting because it becomes singular at threshold.
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from ..constants import NEAR_THRESHOLD_CONDITION
from ..errors import InstabilityError, SingularSystemError
from ..model.drift import DriftModel
from ..model.stability import stability

logger = logging.getLogger(__name__)

# quadrature map [a, a†] -> [X, P] with X = a + a†, P = -i(a - a†)
_QUADRATURE_BLOCK = np.array([[1.0, 1.0], [-1j, 1j]])
_SYMPLECTIC_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class ModeMoments:
    """Phase-sensitive and number moments of a single mode."""

    square: complex
    number: float


@dataclass(frozen=True)
class MomentState:
    """The independent second moments of the steady state.

    Attributes:
        a2: <a²>
        ada: <a†a>
        b2: <b²>
        bdb: <b†b>
        ab: <ab>
        abd: <ab†>
        adb: <a†b>
        bd2: <b†²>
        ad2: <a†²>
        adbd: <a†b†>
        condition_number: Condition number of the moment system (NaN if unknown)
        near_threshold: Condition number above the near-threshold limit
    """

    a2: complex
    ada: float
    b2: complex
    bdb: float
    ab: complex
    abd: complex
    adb: complex
    bd2: complex
    ad2: complex
    adbd: complex
    condition_number: float = float("nan")
    near_threshold: bool = False

    @property
    def cavity(self) -> ModeMoments:
        return ModeMoments(square=self.a2, number=self.ada)

    @property
    def mechanics(self) -> ModeMoments:
        return ModeMoments(square=self.b2, number=self.bdb)

    def second_moment_matrix(self) -> np.ndarray:
        """Full ``Σ[j, k] = <x_j x_k>``, commutators restored."""
        return np.array(
            [
                [self.a2, self.ada + 1.0, self.ab, self.abd],
                [self.ada, self.ad2, self.adb, self.adbd],
                [self.ab, self.adb, self.b2, self.bdb + 1.0],
                [self.abd, self.adbd, self.bdb, self.bd2],
            ],
            dtype=complex,
        )

    def symmetric_covariance(self) -> np.ndarray:
        """Symmetric-ordered covariance of ``[X_a, P_a, X_b, P_b]``; vacuum is I."""
        sigma = self.second_moment_matrix()
        sym = 0.5 * (sigma + sigma.T)
        U = scipy.linalg.block_diag(_QUADRATURE_BLOCK, _QUADRATURE_BLOCK)
        return np.real(U @ sym @ U.T)

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Uncertainty principle V + iΩ ≥ 0 for the quadrature covariance."""
        V = self.symmetric_covariance()
        omega = scipy.linalg.block_diag(_SYMPLECTIC_BLOCK, _SYMPLECTIC_BLOCK)
        smallest = np.linalg.eigvalsh(V + 1j * omega)[0]
        return smallest >= -tol * max(1.0, np.abs(V).max())

    def to_dict(self) -> Dict[str, float]:
        out = {}
        for name in ("a2", "b2", "ab", "abd", "adb", "bd2", "ad2", "adbd"):
            value = getattr(self, name)
            out[f"{name}_re"] = value.real
            out[f"{name}_im"] = value.imag
        out["ada"] = self.ada
        out["bdb"] = self.bdb
        out["condition_number"] = self.condition_number
        out["near_threshold"] = self.near_threshold
        return out


def moment_system(model: DriftModel) -> np.ndarray:
    """Matrix L with ``L vec(Σ) = vec(dΣ/dt)`` minus the inhomogeneous part."""
    identity = np.eye(4)
    return np.kron(model.M, identity) + np.kron(identity, model.M)


def _solve_full_pivot(L: np.ndarray, rhs: np.ndarray, condition: float) -> np.ndarray:
    lu, ipiv, jpiv, info = lapack.zgetc2(L)
    if info > 0:
        raise SingularSystemError(
            "moment system is singular (the model is at its stability threshold)",
            condition_number=condition,
        )
    x, scale = lapack.zgesc2(lu, rhs, ipiv, jpiv)
    return x / scale


def solve_steady_moments(model: DriftModel) -> MomentState:
    """Solve the stationary second-moment equations of a stable model.

    Args:
        model: Drift model of one drive configuration

    Returns:
        Steady-state moments with the solve's condition number

    Raises:
        InstabilityError: The model has no steady state
        SingularSystemError: The moment system is numerically singular

    Example:
        >>> p = EffectiveParams(g=0.0, chi=0.0, gamma=0.01, mu_ext=1.0, n_m0=3.0)
        >>> round(solve_steady_moments(build_drift(p, DriveMode.red())).bdb, 12)
        3.0
    """
    report = stability(model.params, model.mode)
    if not report.stable:
        raise InstabilityError(
            f"no steady state for {model.mode.label}: " + "; ".join(report.violated()),
            condition="; ".join(report.violated()),
        )

    L = moment_system(model)
    rhs = -model.diffusion().astype(complex).reshape(-1)
    condition = float(np.linalg.cond(L))
    sigma = _solve_full_pivot(L, rhs, condition).reshape(4, 4)

    near = condition > NEAR_THRESHOLD_CONDITION
    if near:
        logger.warning(
            "moment system condition number %.3g: %s is close to threshold",
            condition,
            model.mode.label,
        )
    else:
        logger.debug("moment system condition number %.3g", condition)

    return MomentState(
        a2=complex(sigma[0, 0]),
        ada=float(sigma[1, 0].real),
        b2=complex(sigma[2, 2]),
        bdb=float(sigma[3, 2].real),
        ab=complex(sigma[0, 2]),
        abd=complex(sigma[0, 3]),
        adb=complex(sigma[1, 2]),
        bd2=complex(sigma[3, 3]),
        ad2=complex(sigma[1, 1]),
        adbd=complex(sigma[1, 3]),
        condition_number=condition,
        near_threshold=near,
    )
