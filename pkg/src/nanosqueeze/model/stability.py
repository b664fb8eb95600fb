"""Steady-state existence checks.

Two independent criteria are evaluated: the analytic inequalities for each
drive mode and the spectrum of the drift matrix. Disagreement between them
means the analytic inequalities are being used outside their regime.
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg

from ..constants import STABILITY_EPS
from ..params.types import EffectiveParams
from .drift import build_drift
from .drive import DriveKind, DriveMode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityCondition:
    """One analytic inequality ``value < bound``."""

    label: str
    value: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.value < self.bound

    @property
    def margin(self) -> float:
        return self.bound - self.value


@dataclass(frozen=True)
class StabilityReport:
    """Result of both stability criteria.

    Attributes:
        analytic_pass: All analytic inequalities hold
        analytic_margins: Each inequality with its value and bound
        eigenvalue_pass: All drift eigenvalues have real part below -ε_stab
        max_real_eigenvalue: Largest real part among the drift eigenvalues
        eigenvalues: Full drift spectrum
    """

    analytic_pass: bool
    analytic_margins: List[StabilityCondition]
    eigenvalue_pass: bool
    max_real_eigenvalue: float
    eigenvalues: np.ndarray = field(repr=False, compare=False)

    @property
    def stable(self) -> bool:
        return self.eigenvalue_pass

    @property
    def disagreement(self) -> bool:
        return self.analytic_pass != self.eigenvalue_pass

    def violated(self) -> List[str]:
        """Human-readable labels of the failed analytic conditions."""
        failed = [c.label for c in self.analytic_margins if not c.passed]
        if not self.eigenvalue_pass:
            failed.append(f"max Re(eig M) = {self.max_real_eigenvalue:.6g} >= -eps")
        return failed


def analytic_conditions(
    params: EffectiveParams, mode: DriveMode
) -> List[StabilityCondition]:
    """The closed-form stability inequalities of a drive mode.

    Args:
        params: Effective parameters
        mode: Drive configuration

    Returns:
        List of conditions, all of which must pass
    """
    chi = abs(params.chi)
    g2_mu = params.g**2 / params.mu
    gamma = params.gamma
    if mode.kind is DriveKind.BLUE:
        return [StabilityCondition("|chi| < gamma/4 - g^2/mu", chi, gamma / 4 - g2_mu)]
    if mode.kind is DriveKind.RED:
        return [
            StabilityCondition("|chi| < g^2/mu + gamma/4", chi, g2_mu + gamma / 4),
            StabilityCondition("|chi| < (gamma + mu)/4", chi, (gamma + params.mu) / 4),
        ]
    return [StabilityCondition("|chi| < gamma/4", chi, gamma / 4)]


def stability_threshold(params: EffectiveParams, mode: DriveMode) -> float:
    """Largest |χ| the analytic inequalities allow at the given g, γ, μ."""
    return min(c.bound for c in analytic_conditions(params, mode))


def stability(params: EffectiveParams, mode: DriveMode) -> StabilityReport:
    """Evaluate the analytic and eigenvalue stability criteria.

    Args:
        params: Effective parameters
        mode: Drive configuration

    Returns:
        Report carrying both verdicts

    Example:
        >>> p = EffectiveParams(g=0.1, chi=0.0, gamma=0.01, mu_ext=1.0)
        >>> stability(p, DriveMode.red()).stable
        True
    """
    conditions = analytic_conditions(params, mode)
    analytic_pass = all(c.passed for c in conditions)

    model = build_drift(params, mode)
    eigenvalues = scipy.linalg.eigvals(model.M)
    max_real = float(np.max(eigenvalues.real))
    eps = STABILITY_EPS * max(params.mu, params.gamma)
    eigenvalue_pass = max_real < -eps

    report = StabilityReport(
        analytic_pass=analytic_pass,
        analytic_margins=conditions,
        eigenvalue_pass=eigenvalue_pass,
        max_real_eigenvalue=max_real,
        eigenvalues=eigenvalues,
    )
    if report.disagreement:
        logger.warning(
            "%s: analytic stability %s but eigenvalue criterion %s (max Re = %.6g)",
            mode.label,
            analytic_pass,
            eigenvalue_pass,
            max_real,
        )
    return report
