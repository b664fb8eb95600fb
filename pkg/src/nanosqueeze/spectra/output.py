"""Output-field spectra from the input-output transfer matrix.

``x_out(ω) = T(ω) x_in(ω)`` with ``T(ω) = -(D A(ω)⁻¹ B + J)``. Row 0 gives
a_out(ω) and row 1 gives a_out†(-ω). Input pairs are δ-correlated as
``<x_in,j(ω) x_in,k(ω')> ∝ C_in[j, k] δ(ω + ω')``, so every output correlation
is a bilinear form ``r(ω) C_in s(-ω)ᵀ``.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..constants import IMAGINARY_RESIDUE_LIMIT
from ..errors import InstabilityError, SingularSystemError
from ..model.drift import DriftModel
from ..model.stability import stability
from .types import SpectrumGrid, SpectrumResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OutputCorrelations:
    """δ-stripped output moments on a grid.

    Attributes:
        aa: <a_o(ω) a_o(-ω)>
        adad: <a_o†(-ω) a_o†(ω)>
        ada: <a_o†(-ω) a_o(-ω)> in the normally ordered pairing
    """

    aa: np.ndarray
    adad: np.ndarray
    ada: np.ndarray


def _require_stable(model: DriftModel) -> None:
    report = stability(model.params, model.mode)
    if not report.stable:
        raise InstabilityError(
            f"no stationary output spectrum for {model.mode.label}: "
            + "; ".join(report.violated()),
            condition="; ".join(report.violated()),
        )


def _transfer_stack(model: DriftModel, omega: np.ndarray) -> np.ndarray:
    A = 1j * omega[:, None, None] * np.eye(4) + model.M
    condition = np.linalg.cond(A)
    worst = float(np.max(condition))
    if not np.isfinite(worst) or worst > 1.0 / np.finfo(float).eps:
        raise SingularSystemError(
            "A(omega) is singular on the grid", condition_number=worst
        )
    inputs = np.broadcast_to(model.B, (omega.size,) + model.B.shape)
    response = np.linalg.solve(A, inputs)
    return -(model.D @ response + model.J)


def transfer_matrix(model: DriftModel, omega: Union[float, np.ndarray]) -> np.ndarray:
    """Input-output transfer matrix T(ω) = -(D A(ω)⁻¹ B + J).

    Args:
        model: Drift model; must be stable
        omega: One frequency or an array of frequencies (rad/s)

    Returns:
        4×n_in matrix, or an array of them stacked along the first axis

    Example:
        >>> p = EffectiveParams(g=0.0, chi=0.0, gamma=0.01, mu_ext=1.0)
        >>> transfer_matrix(build_drift(p, DriveMode.red()), 0.0)[0, 0]
        (1+0j)
    """
    _require_stable(model)
    scalar = np.ndim(omega) == 0
    stack = _transfer_stack(model, np.atleast_1d(np.asarray(omega, dtype=float)))
    return stack[0] if scalar else stack


def output_correlations(model: DriftModel, omega: np.ndarray) -> OutputCorrelations:
    """Normally ordered output moments at each frequency of ``omega``."""
    _require_stable(model)
    omega = np.asarray(omega, dtype=float)
    plus = _transfer_stack(model, omega)
    minus = _transfer_stack(model, -omega)
    C = model.C_in
    r1_plus, r2_plus = plus[:, 0, :], plus[:, 1, :]
    r1_minus, r2_minus = minus[:, 0, :], minus[:, 1, :]
    return OutputCorrelations(
        aa=np.einsum("ni,ij,nj->n", r1_plus, C, r1_minus),
        adad=np.einsum("ni,ij,nj->n", r2_plus, C, r2_minus),
        ada=np.einsum("ni,ij,nj->n", r2_plus, C, r1_minus),
    )


def _real_part(values: np.ndarray, label: str) -> np.ndarray:
    scale = np.maximum(1.0, np.abs(values.real))
    residue = float(np.max(np.abs(values.imag) / scale))
    if residue > IMAGINARY_RESIDUE_LIMIT:
        raise SingularSystemError(
            f"{label} has imaginary residue {residue:.3e}",
            condition_number=float("nan"),
        )
    if residue > 0.1 * IMAGINARY_RESIDUE_LIMIT:
        logger.warning(
            "%s imaginary residue %.3e is close to the limit", label, residue
        )
    return values.real.copy()


def output_spectrum(
    model: DriftModel, theta: float, grid: SpectrumGrid
) -> SpectrumResult:
    """Normally ordered output quadrature spectra.

        S_X(ω) = e^{-2iθ}<a_o a_o> + e^{2iθ}<a_o† a_o†> + 2<a_o† a_o>

    and S_Y with the sign of the first two terms flipped.

    Args:
        model: Drift model; must be stable
        theta: Local-oscillator phase
        grid: Frequencies

    Returns:
        Spectrum with ``S_squeezed = S_X`` and ``S_antisqueezed = S_Y``
    """
    corr = output_correlations(model, grid.omega)
    phase = np.exp(-2j * theta) * corr.aa + np.exp(2j * theta) * corr.adad
    S_X = _real_part(phase + 2.0 * corr.ada, "S_X")
    S_Y = _real_part(-phase + 2.0 * corr.ada, "S_Y")
    return SpectrumResult(
        grid=grid,
        S_squeezed=S_X,
        S_antisqueezed=S_Y,
        theta=theta,
        mode=model.mode,
        params=model.params,
    )


def adiabatic_output_relation(
    model: DriftModel, omega: Union[float, np.ndarray]
) -> np.ndarray:
    """Transfer matrix with the cavity eliminated adiabatically.

    The cavity is slaved to the nanoresonator and the inputs,
    ``x_a = -M_aa⁻¹ (M_ab x_b + B_a x_in)``, and the nanoresonator evolves
    under the reduced drift. On one sideband the cavity output becomes
    a_out = ∓(2ig/√μ) b(†) + a_in for μ_int = 0.

    Args:
        model: Drift model
        omega: One frequency or an array of frequencies (rad/s)

    Returns:
        Approximate transfer matrix with the shape of ``transfer_matrix``
    """
    scalar = np.ndim(omega) == 0
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    M = model.M
    M_aa, M_ab = M[:2, :2], M[:2, 2:]
    M_ba, M_bb = M[2:, :2], M[2:, 2:]
    B_a, B_b = model.B[:2], model.B[2:]

    slave = -np.linalg.solve(M_aa, np.hstack([M_ab, B_a]))
    slave_b, slave_in = slave[:, :2], slave[:, 2:]
    reduced_M = M_bb + M_ba @ slave_b
    reduced_B = B_b + M_ba @ slave_in

    A_b = 1j * omega[:, None, None] * np.eye(2) + reduced_M
    inputs = np.broadcast_to(reduced_B, (omega.size,) + reduced_B.shape)
    x_b = -np.linalg.solve(A_b, inputs)
    x_a = slave_b @ x_b + slave_in
    response = np.concatenate([x_a, x_b], axis=1)
    stack = model.D @ response - model.J
    return stack[0] if scalar else stack
