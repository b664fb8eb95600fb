"""Parameter records for the device and for the effective model.

``PhysicalParams`` holds lab-level quantities, ``EffectiveParams`` the rates
that enter the linearised dynamics. All angular frequencies are in rad/s.
"""

import math
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Optional

from ..constants import LC_TOLERANCE
from ..errors import ParameterError


@dataclass(frozen=True)
class PhysicalParams:
    """Experimentally accessible quantities of the cavity and nanoresonator.

    Attributes:
        omega_c: Cavity angular frequency (rad/s)
        nu: Mechanical angular frequency (rad/s)
        mass: Nanoresonator mass (kg)
        beta: Capacitance ratio C0/CΣ, dimensionless in (0, 1)
        d: Equilibrium nanoresonator-cavity gap (m)
        C_c0: Pump-electrode capacitance (F)
        x_c0: Pump-electrode gap (m)
        V0: Static pump-electrode voltage (V)
        VP: Pump modulation amplitude (V)
        E_drive: Cavity drive amplitude 𝓔 (1/s)
        Q_cavity: Cavity quality factor
        Q_mech: Mechanical quality factor
        T_m: Mechanical bath temperature (K)
        L: Equivalent cavity inductance (H), optional
        C_sigma: Equivalent cavity capacitance (F), optional
    """

    omega_c: float
    nu: float
    mass: float
    beta: float
    d: float
    C_c0: float
    x_c0: float
    V0: float
    VP: float
    E_drive: float
    Q_cavity: float
    Q_mech: float
    T_m: float = 0.0
    L: Optional[float] = None
    C_sigma: Optional[float] = None

    def __post_init__(self):
        positive = {
            "omega_c": self.omega_c,
            "nu": self.nu,
            "mass": self.mass,
            "d": self.d,
            "C_c0": self.C_c0,
            "x_c0": self.x_c0,
            "Q_cavity": self.Q_cavity,
            "Q_mech": self.Q_mech,
        }
        if self.L is not None:
            positive["L"] = self.L
        if self.C_sigma is not None:
            positive["C_sigma"] = self.C_sigma
        bad = [name for name, value in positive.items() if not value > 0]
        if bad:
            raise ParameterError(f"must be strictly positive: {', '.join(bad)}")

        nonnegative = {
            "V0": self.V0,
            "VP": self.VP,
            "E_drive": self.E_drive,
            "T_m": self.T_m,
        }
        bad = [name for name, value in nonnegative.items() if value < 0]
        if bad:
            raise ParameterError(f"must be non-negative: {', '.join(bad)}")

        if not 0.0 < self.beta < 1.0:
            raise ParameterError(f"beta must lie in (0, 1), got {self.beta}")

        if self.L is not None and self.C_sigma is not None:
            expected = 1.0 / math.sqrt(self.L * self.C_sigma)
            mismatch = abs(expected - self.omega_c) / self.omega_c
            if mismatch > LC_TOLERANCE:
                raise ParameterError(
                    f"omega_c = {self.omega_c:.6g} rad/s is inconsistent with "
                    f"1/sqrt(L C_sigma) = {expected:.6g} rad/s "
                    f"(relative mismatch {mismatch:.3%})"
                )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class EffectiveParams:
    """Rates of the linearised cavity-nanoresonator model.

    Attributes:
        g: Effective coupling (1/s)
        chi: Parametric drive strength χ (1/s), complex allowed
        gamma: Mechanical damping (1/s)
        mu_ext: Out-coupling cavity damping (1/s)
        mu_int: Internal cavity loss (1/s)
        n_m0: Mean thermal occupation of the mechanical bath
    """

    g: float
    chi: complex
    gamma: float
    mu_ext: float
    mu_int: float = 0.0
    n_m0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "chi", complex(self.chi))
        problems = []
        if self.g < 0:
            problems.append(f"g = {self.g} < 0")
        if not self.gamma > 0:
            problems.append(f"gamma = {self.gamma} <= 0")
        if not self.mu_ext > 0:
            problems.append(f"mu_ext = {self.mu_ext} <= 0")
        if self.mu_int < 0:
            problems.append(f"mu_int = {self.mu_int} < 0")
        if self.n_m0 < 0:
            problems.append(f"n_m0 = {self.n_m0} < 0")
        if problems:
            raise ParameterError("invalid effective parameters: " + "; ".join(problems))

    @property
    def mu(self) -> float:
        """Total cavity damping μ = μ_ext + μ_int."""
        return self.mu_ext + self.mu_int

    @property
    def chi_is_real(self) -> bool:
        return abs(self.chi.imag) <= 1e-12 * max(abs(self.chi), 1e-300)

    @property
    def epsilon(self) -> float:
        """Adiabatic parameter max(g, |χ|)/μ."""
        return max(self.g, abs(self.chi)) / self.mu

    def with_updates(self, **changes: Any) -> "EffectiveParams":
        return replace(self, **changes)

    def scaled(self, factor: float) -> "EffectiveParams":
        """Return a copy with g and χ multiplied by ``factor``."""
        return replace(self, g=self.g * factor, chi=self.chi * factor)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "g": self.g,
            "chi": {"re": self.chi.real, "im": self.chi.imag},
            "gamma": self.gamma,
            "mu_ext": self.mu_ext,
            "mu_int": self.mu_int,
            "n_m0": self.n_m0,
        }

    @classmethod
    def in_mu_units(
        cls,
        mu: float,
        g: float,
        chi: complex,
        gamma: float,
        n_m0: float = 0.0,
        mu_int: float = 0.0,
    ) -> "EffectiveParams":
        """Build parameters from rates quoted as fractions of ``mu``."""
        return cls(
            g=g * mu,
            chi=complex(chi) * mu,
            gamma=gamma * mu,
            mu_ext=mu,
            mu_int=mu_int * mu,
            n_m0=n_m0,
        )
