"""Phase-insensitive amplifier added after the cavity."""

from ..errors import ParameterError
from .types import AmplifierSettings, SpectrumResult


def amplifier_noise(spec: SpectrumResult, A: float, n_a: float) -> SpectrumResult:
    """Apply S → A·S + 2(A - 1)(n_a + 1) to both quadratures.

    Args:
        spec: Spectrum without amplifier noise
        A: Power gain, at least 1
        n_a: Amplifier noise quanta

    Returns:
        Amplified spectrum; error bars scale by A

    Example:
        >>> amplifier_noise(spec, A=2.0, n_a=0.0).S_squeezed  # S = -0.4 -> 1.2
    """
    if A < 1:
        raise ParameterError(f"amplifier gain must be >= 1, got {A}")
    if n_a < 0:
        raise ParameterError(f"amplifier noise must be non-negative, got {n_a}")
    if spec.amplifier is not None:
        raise ParameterError("spectrum already includes amplifier noise")

    floor = 2.0 * (A - 1.0) * (n_a + 1.0)
    changes = {
        "S_squeezed": A * spec.S_squeezed + floor,
        "S_antisqueezed": A * spec.S_antisqueezed + floor,
        "amplifier": AmplifierSettings(gain=A, added_noise=n_a),
    }
    if spec.has_errors:
        changes["stderr_squeezed"] = A * spec.stderr_squeezed
        changes["stderr_antisqueezed"] = A * spec.stderr_antisqueezed
    return spec.with_values(**changes)
