"""Exception hierarchy for nanosqueeze."""

from typing import Optional


class NanosqueezeError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(NanosqueezeError, ValueError):
    """A parameter lies outside the domain of an operation."""


class InstabilityError(NanosqueezeError, RuntimeError):
    """The linear dynamics have no steady state.

    Args:
        message: Human-readable description
        condition: Label of the violated stability condition, if known
    """

    def __init__(self, message: str, condition: Optional[str] = None):
        super().__init__(message)
        self.condition = condition


class SingularSystemError(NanosqueezeError, RuntimeError):
    """A linear system is numerically singular (typically exactly at threshold)."""

    def __init__(self, message: str, condition_number: float = float("inf")):
        super().__init__(f"{message} (condition number {condition_number:.3e})")
        self.condition_number = condition_number


class TruncationError(NanosqueezeError, RuntimeError):
    """The Fock-space truncation of a mode is too small for the steady state."""

    def __init__(self, message: str, mode: str):
        super().__init__(message)
        self.mode = mode


class GridSpanError(NanosqueezeError, ValueError):
    """A frequency grid does not span enough of the spectrum."""

    def __init__(self, message: str, required_span: float):
        super().__init__(f"{message}; required span about ±{required_span:.6g} rad/s")
        self.required_span = required_span


class InsufficientDataError(NanosqueezeError, ValueError):
    """A simulated series is too short for the requested estimate."""

    def __init__(self, message: str, required_duration: float):
        super().__init__(f"{message}; required duration {required_duration:.6g} s")
        self.required_duration = required_duration


class ConfigError(NanosqueezeError, ValueError):
    """A run configuration is missing fields or holds invalid values."""

    def __init__(self, message: str, fields: Optional[list] = None):
        if fields:
            message = f"{message}: {', '.join(fields)}"
        super().__init__(message)
        self.fields = list(fields or [])
