"""Frequency grids and spectrum records."""

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

import numpy as np

from ..errors import ParameterError
from ..model.drive import DriveMode
from ..params.types import EffectiveParams


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    """Strictly increasing angular frequencies (rad/s) that include ω = 0."""

    omega: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        if omega.ndim != 1 or omega.size < 3:
            raise ParameterError("a spectrum grid needs at least three frequencies")
        if not np.all(np.diff(omega) > 0):
            raise ParameterError("spectrum grid must be strictly increasing")
        if not np.any(omega == 0.0):
            raise ParameterError("spectrum grid must contain omega = 0")
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    def __len__(self) -> int:
        return self.omega.size

    @property
    def span(self) -> float:
        """Smallest distance from ω = 0 to either end of the grid."""
        return float(min(-self.omega[0], self.omega[-1]))

    @property
    def zero_index(self) -> int:
        return int(np.flatnonzero(self.omega == 0.0)[0])


@dataclass(frozen=True)
class AmplifierSettings:
    gain: float
    added_noise: float


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Normally ordered output quadrature spectra on a grid.

    ``S_squeezed`` is the X'(θ) quadrature and ``S_antisqueezed`` its conjugate.
    Error columns are only present for estimated spectra.
    """

    grid: SpectrumGrid
    S_squeezed: np.ndarray
    S_antisqueezed: np.ndarray
    theta: float
    mode: DriveMode
    params: EffectiveParams
    amplifier: Optional[AmplifierSettings] = None
    stderr_squeezed: Optional[np.ndarray] = None
    stderr_antisqueezed: Optional[np.ndarray] = None

    @property
    def omega(self) -> np.ndarray:
        return self.grid.omega

    @property
    def has_errors(self) -> bool:
        return self.stderr_squeezed is not None

    def minimum(self) -> Dict[str, float]:
        """Most negative squeezed value and where it occurs."""
        index = int(np.argmin(self.S_squeezed))
        return {
            "omega": float(self.omega[index]),
            "S_squeezed": float(self.S_squeezed[index]),
        }

    def with_values(self, **changes: Any) -> "SpectrumResult":
        return replace(self, **changes)

    def columns(self) -> Dict[str, np.ndarray]:
        """Named columns in output order."""
        cols = {
            "omega_rad_s": self.omega,
            "S_squeezed": self.S_squeezed,
            "S_antisqueezed": self.S_antisqueezed,
        }
        if self.has_errors:
            cols["stderr_squeezed"] = self.stderr_squeezed
            cols["stderr_antisqueezed"] = self.stderr_antisqueezed
        return cols
