"""Feasibility report for a device and an operating point.

The report never raises for physics reasons: every check is recorded with its
ratio against the threshold so that borderline designs can be compared.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

from ..constants import MUCH_GREATER, MUCH_LESS, QUOTED_COOLING_RATE
from .derivation import circulating_power, cooling_rate, drive_photon_number
from .types import EffectiveParams, PhysicalParams

logger = logging.getLogger(__name__)

POWER_CONVENTION_NOTE = (
    "P = n_d hbar omega_c^2 is convention-dependent; the physical drive voltage "
    "is not derived because the input-coupling model is unspecified"
)


@dataclass(frozen=True)
class FeasibilityCheck:
    """One regime condition.

    ``ratio`` is the quantity compared with ``threshold``; ``required`` checks
    decide ``FeasibilityReport.all_pass``, the others are advisory.
    """

    name: str
    passed: bool
    ratio: float
    threshold: float
    detail: str
    required: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "ratio": self.ratio,
            "threshold": self.threshold,
            "detail": self.detail,
            "required": self.required,
        }


@dataclass(frozen=True)
class FeasibilityReport:
    checks: List[FeasibilityCheck]
    cooling_rate: float
    quoted_cooling_rate: float
    drive_photon_number: float
    circulating_power: float
    splitting_power_factor: float
    notes: List[str] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    @property
    def cooling_rate_discrepancy(self) -> float:
        """Ratio of the quoted Γ to the one computed from Γ = 4g²/μ."""
        if self.cooling_rate == 0:
            return math.inf
        return self.quoted_cooling_rate / self.cooling_rate

    def check(self, name: str) -> FeasibilityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "all_pass": self.all_pass,
            "checks": [c.to_dict() for c in self.checks],
            "cooling_rate": self.cooling_rate,
            "quoted_cooling_rate": self.quoted_cooling_rate,
            "cooling_rate_discrepancy": self.cooling_rate_discrepancy,
            "drive_photon_number": self.drive_photon_number,
            "circulating_power": self.circulating_power,
            "splitting_power_factor": self.splitting_power_factor,
            "notes": list(self.notes),
        }


def feasibility_report(
    p: PhysicalParams, e: EffectiveParams, mode
) -> FeasibilityReport:
    """Check the regime assumptions behind the effective model.

    Args:
        p: Device parameters (supply ν, ω_c and the drive)
        e: Operating point, usually derived from ``p`` with overrides
        mode: ``DriveMode`` used for the stability check

    Returns:
        Report with one entry per condition

    Example:
        >>> report = feasibility_report(device, operating_point, DriveMode.red())
        >>> report.check("resolved_sideband").ratio  # doctest: +SKIP
        333.3...
    """
    from ..model.stability import stability

    mu = e.mu
    gamma_cool = cooling_rate(e.g, mu)
    checks = []

    sideband_ratio = p.nu / mu
    checks.append(
        FeasibilityCheck(
            name="resolved_sideband",
            passed=sideband_ratio >= MUCH_GREATER,
            ratio=sideband_ratio,
            threshold=MUCH_GREATER,
            detail="|delta|/mu = nu/mu",
        )
    )

    eps = e.epsilon
    checks.append(
        FeasibilityCheck(
            name="adiabatic",
            passed=eps <= MUCH_LESS,
            ratio=eps,
            threshold=MUCH_LESS,
            detail="max(g, |chi|)/mu",
        )
    )

    checks.append(
        FeasibilityCheck(
            name="cold_bath",
            passed=e.n_m0 <= MUCH_LESS,
            ratio=e.n_m0,
            threshold=MUCH_LESS,
            detail="n_m0",
        )
    )

    gamma_ratio = e.gamma / gamma_cool if gamma_cool > 0 else math.inf
    checks.append(
        FeasibilityCheck(
            name="quantum_limited",
            passed=gamma_ratio <= MUCH_LESS,
            ratio=gamma_ratio,
            threshold=MUCH_LESS,
            detail="gamma/(4 g^2/mu)",
        )
    )

    report = stability(e, mode)
    worst = min((c.margin for c in report.analytic_margins), default=0.0)
    checks.append(
        FeasibilityCheck(
            name="stability",
            passed=report.stable,
            ratio=report.max_real_eigenvalue,
            threshold=0.0,
            detail=f"{mode.label}: analytic margin {worst:.6g} 1/s",
        )
    )

    amp_ratio = 4 * abs(e.chi) / e.gamma
    checks.append(
        FeasibilityCheck(
            name="parametric_amplifier",
            passed=amp_ratio >= MUCH_GREATER,
            ratio=amp_ratio,
            threshold=MUCH_GREATER,
            detail="4|chi|/gamma",
            required=False,
        )
    )

    notes = [POWER_CONVENTION_NOTE]
    n_d = drive_photon_number(p.E_drive, p.nu)
    power = circulating_power(n_d, p.omega_c)

    split_g2 = (mu**2 + (e.gamma + 4 * e.chi.real) ** 2) / 8
    power_factor = split_g2 / e.g**2 if e.g > 0 else math.inf
    if power_factor <= 1:
        notes.append(
            "normal-mode splitting regime: 8g^2 > mu^2 + (gamma + 4 chi)^2; "
            "the drive power this needs is well beyond typical circulating powers"
        )
    else:
        notes.append(
            f"normal-mode splitting would need {power_factor:.3g}x"
            " the circulating power"
        )

    if gamma_cool > 0:
        discrepancy = QUOTED_COOLING_RATE / gamma_cool
        if not 0.5 < discrepancy < 2.0:
            message = (
                f"computed cooling rate 4g^2/mu = {gamma_cool:.4g} 1/s differs from "
                f"the quoted {QUOTED_COOLING_RATE:.4g} 1/s"
                f" by a factor {discrepancy:.3g}"
            )
            logger.warning(message)
            notes.append(message)

    return FeasibilityReport(
        checks=checks,
        cooling_rate=gamma_cool,
        quoted_cooling_rate=QUOTED_COOLING_RATE,
        drive_photon_number=n_d,
        circulating_power=power,
        splitting_power_factor=power_factor,
        notes=notes,
    )
