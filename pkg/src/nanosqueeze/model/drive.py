"""Cavity drive configurations."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

from ..errors import ParameterError


class DriveKind(str, Enum):
    BLUE = "blue"
    RED = "red"
    BLUE_RED = "blue_red"


@dataclass(frozen=True)
class DriveMode:
    """Which sideband(s) the cavity is driven on.

    ``psi`` is the relative phase between the two cavity drives and exists only
    for the two-sideband drive.
    """

    kind: DriveKind
    psi: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DriveKind(self.kind))
        if self.kind is DriveKind.BLUE_RED:
            if self.psi is None:
                raise ParameterError("blue_red drive requires a relative phase psi")
            if not math.isfinite(self.psi):
                raise ParameterError(f"psi must be finite, got {self.psi}")
            object.__setattr__(self, "psi", float(self.psi))
        elif self.psi is not None:
            raise ParameterError(
                f"psi is only defined for blue_red, not {self.kind.value}"
            )

    @classmethod
    def blue(cls) -> "DriveMode":
        return cls(DriveKind.BLUE)

    @classmethod
    def red(cls) -> "DriveMode":
        return cls(DriveKind.RED)

    @classmethod
    def blue_red(cls, psi: float = math.pi / 4) -> "DriveMode":
        return cls(DriveKind.BLUE_RED, psi)

    @property
    def label(self) -> str:
        if self.kind is DriveKind.BLUE_RED:
            return f"blue_red(psi={self.psi:.6g})"
        return self.kind.value

    def to_dict(self) -> Union[str, Dict[str, Any]]:
        """Config representation: a bare name, or a dict carrying psi."""
        if self.kind is DriveKind.BLUE_RED:
            return {"kind": self.kind.value, "psi": self.psi}
        return self.kind.value

    @classmethod
    def from_config(cls, value: Union[str, Dict[str, Any], "DriveMode"]) -> "DriveMode":
        """Parse ``"blue"``, ``"red"`` or ``{"kind": "blue_red", "psi": x}``.

        Args:
            value: Config entry

        Returns:
            The drive mode

        Example:
            >>> DriveMode.from_config({"kind": "blue_red", "psi": 0.5}).psi
            0.5
        """
        if isinstance(value, DriveMode):
            return value
        if isinstance(value, str):
            if value == DriveKind.BLUE_RED.value:
                return cls.blue_red()
            try:
                return cls(DriveKind(value))
            except ValueError:
                raise ParameterError(f"unknown drive mode {value!r}") from None
        if isinstance(value, dict):
            try:
                kind = DriveKind(value.get("kind"))
            except ValueError:
                raise ParameterError(f"unknown drive mode {value!r}") from None
            return cls(kind, value.get("psi"))
        raise ParameterError(f"cannot interpret {value!r} as a drive mode")
