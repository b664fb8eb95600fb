"""Agreement between the full and the adiabatically reduced master equations."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from ..model.drive import DriveMode
from ..params.types import EffectiveParams
from .fock import FockConfig, full_me_steady
from .reduced import reduced_me_steady

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdiabaticReport:
    """Relative <b†b> discrepancy at ε and at ε/2.

    Attributes:
        epsilon: max(g, |χ|)/μ of the supplied parameters
        full_bdb: <b†b> from the full master equation
        reduced_bdb: <b†b> from the reduced master equation
        discrepancy: |full - reduced| / reduced
        half_discrepancy: The same with g and χ halved
    """

    epsilon: float
    full_bdb: float
    reduced_bdb: float
    discrepancy: float
    half_discrepancy: float

    @property
    def improvement(self) -> float:
        """discrepancy / half_discrepancy; infinite when the latter vanishes."""
        if self.half_discrepancy == 0:
            return math.inf if self.discrepancy > 0 else 1.0
        return self.discrepancy / self.half_discrepancy


def _relative(full: float, reduced: float) -> float:
    if full == reduced:
        return 0.0
    return abs(full - reduced) / max(abs(reduced), 1e-300)


def _discrepancy(params: EffectiveParams, mode: DriveMode, cfg: FockConfig):
    full = full_me_steady(params, mode, cfg).moments.bdb
    reduced = reduced_me_steady(params, mode, cfg).bdb
    return full, reduced, _relative(full, reduced)


def adiabatic_consistency(
    params: EffectiveParams, mode: DriveMode, cfg: Optional[FockConfig] = None
) -> AdiabaticReport:
    """Compare full and reduced master equations at ε and ε/2.

    Args:
        params: Effective parameters with ε ≤ 0.1
        mode: Drive configuration
        cfg: Truncation and solver settings shared by both solves

    Returns:
        Discrepancies at both coupling strengths
    """
    cfg = cfg or FockConfig()
    full, reduced, discrepancy = _discrepancy(params, mode, cfg)
    _, _, half = _discrepancy(params.scaled(0.5), mode, cfg)
    logger.info(
        "adiabatic consistency at eps = %.3g: %.3e, at eps/2: %.3e",
        params.epsilon,
        discrepancy,
        half,
    )
    return AdiabaticReport(
        epsilon=params.epsilon,
        full_bdb=full,
        reduced_bdb=reduced,
        discrepancy=discrepancy,
        half_discrepancy=half,
    )
