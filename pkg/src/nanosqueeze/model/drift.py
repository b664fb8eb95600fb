"""Linear drift, damping and input-noise matrices of the effective model.

The mode vector is ordered ``[a, a†, b, b†]``. In the time domain the
Langevin equations read ``dx/dt = M x + B x_in`` and the output field is
``x_out = D x - J x_in``; in the frequency domain ``A(ω) x(ω) = -B x_in(ω)``
with ``A(ω) = iω I + M``.

When the cavity has internal loss the input vector is extended by a second
cavity port ``[c_in, c_in†]`` that drives the cavity but is never observed.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from ..params.types import EffectiveParams
from .drive import DriveKind, DriveMode

MODE_LABELS = ("a", "a_dag", "b", "b_dag")


def _coupling_block(params: EffectiveParams, mode: DriveMode) -> np.ndarray:
    """Drift matrix of the mode without the damping diagonal."""
    g = params.g
    chi = params.chi
    M = np.zeros((4, 4), dtype=complex)

    # parametric drive on the nanoresonator
    M[2, 3] = -2j * chi
    M[3, 2] = 2j * np.conj(chi)

    if mode.kind is DriveKind.BLUE:
        M[0, 3] = -1j * g
        M[1, 2] = 1j * g
        M[2, 1] = -1j * g
        M[3, 0] = 1j * g
    elif mode.kind is DriveKind.RED:
        M[0, 2] = 1j * g
        M[1, 3] = -1j * g
        M[2, 0] = 1j * g
        M[3, 1] = -1j * g
    else:
        minus = cmath.exp(-1j * mode.psi)
        plus = cmath.exp(1j * mode.psi)
        M[0, 2] = -1j * g * minus
        M[0, 3] = -1j * g * plus
        M[1, 2] = 1j * g * minus
        M[1, 3] = 1j * g * plus
        M[2, 0] = -1j * g * plus
        M[2, 1] = -1j * g * plus
        M[3, 0] = 1j * g * minus
        M[3, 1] = 1j * g * minus
    return M


def input_correlations(n_m0: float, mu_int: float = 0.0) -> np.ndarray:
    """δ-correlation coefficients ``<x_in,j(t) x_in,k(t')> = C[j, k] δ(t - t')``.

    Args:
        n_m0: Mean thermal phonon number of the mechanical bath
        mu_int: Internal cavity loss; a positive value adds a vacuum port

    Returns:
        4×4 matrix, or 6×6 when ``mu_int > 0``

    Example:
        >>> input_correlations(2.0)[2, 3]
        3.0
    """
    if n_m0 < 0:
        raise ParameterError(f"n_m0 must be non-negative, got {n_m0}")
    size = 6 if mu_int > 0 else 4
    C = np.zeros((size, size))
    C[0, 1] = 1.0
    C[2, 3] = n_m0 + 1.0
    C[3, 2] = n_m0
    if size == 6:
        C[4, 5] = 1.0
    return C


@dataclass(frozen=True, eq=False)
class DriftModel:
    """Matrices of one drive configuration.

    Attributes:
        M: 4×4 time-domain drift matrix
        D: 4×4 diagonal output-coupling matrix diag(√μ_ext, √μ_ext, √γ, √γ)
        B: 4×4 (or 4×6) input-coupling matrix
        C_in: Input correlation matrix matching the columns of B
        mode: Drive configuration
        params: Effective parameters the matrices were built from
    """

    M: np.ndarray
    D: np.ndarray
    B: np.ndarray
    C_in: np.ndarray
    mode: DriveMode
    params: EffectiveParams

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]

    @property
    def J(self) -> np.ndarray:
        """Selector of the observed input ports ``[I_4 | 0]``."""
        return np.eye(4, self.n_inputs)

    def dynamical_matrix(self, omega: float) -> np.ndarray:
        """A(ω) = iω I + M."""
        return 1j * omega * np.eye(4) + self.M

    def diffusion(self) -> np.ndarray:
        """Inhomogeneous term B C_in Bᵀ of the second-moment equation."""
        return self.B @ self.C_in @ self.B.T


def build_drift(params: EffectiveParams, mode: DriveMode) -> DriftModel:
    """Assemble the drift, damping and noise matrices for a drive mode.

    The damping diagonal uses the total cavity loss μ = μ_ext + μ_int, while
    only √μ_ext enters the output boundary condition.

    Args:
        params: Effective parameters
        mode: Drive configuration

    Returns:
        The assembled model
    """
    M = _coupling_block(params, mode)
    M += np.diag([-params.mu / 2, -params.mu / 2, -params.gamma / 2, -params.gamma / 2])

    root_ext = np.sqrt(params.mu_ext)
    root_gamma = np.sqrt(params.gamma)
    D = np.diag([root_ext, root_ext, root_gamma, root_gamma])

    C_in = input_correlations(params.n_m0, params.mu_int)
    B = np.zeros((4, C_in.shape[0]))
    B[:, :4] = D
    if params.mu_int > 0:
        root_int = np.sqrt(params.mu_int)
        B[0, 4] = root_int
        B[1, 5] = root_int

    return DriftModel(M=M, D=D, B=B, C_in=C_in, mode=mode, params=params)
