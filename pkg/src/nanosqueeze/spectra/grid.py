"""Default frequency grids."""

import logging
from typing import Optional

import numpy as np

from ..errors import ParameterError
from ..params.types import EffectiveParams
from .types import SpectrumGrid

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 2049
SPAN_FACTOR = 20.0


def default_span(params: EffectiveParams) -> float:
    """±20·max(μ, γ + 4|χ|, 2g), wide enough for the ω⁻⁴ tails."""
    fastest = max(params.mu, params.gamma + 4 * abs(params.chi), 2 * params.g)
    return SPAN_FACTOR * fastest


def make_grid(
    params: EffectiveParams,
    points: int = DEFAULT_POINTS,
    span: Optional[float] = None,
    densify: bool = False,
) -> SpectrumGrid:
    """Symmetric grid around ω = 0.

    Args:
        params: Effective parameters setting the default span
        points: Number of frequencies; must be odd so ω = 0 is a grid point
        span: Half-width in rad/s, default ``default_span(params)``
        densify: Add log-spaced points near ω = 0

    Returns:
        The grid

    Example:
        >>> grid = make_grid(params, points=5, span=2.0)
        >>> grid.omega.tolist()
        [-2.0, -1.0, 0.0, 1.0, 2.0]
    """
    if points < 3 or points % 2 == 0:
        raise ParameterError(f"grid points must be odd and >= 3, got {points}")
    if span is None:
        span = default_span(params)
    if not span > 0:
        raise ParameterError(f"grid span must be positive, got {span}")

    half = np.linspace(0.0, span, points // 2 + 1)[1:]
    positive = half
    if densify:
        step = half[0]
        extra = np.geomspace(step * 1e-4, step, 64, endpoint=False)
        positive = np.union1d(half, extra)
        logger.debug("densified grid with %d extra points per side", extra.size)
    omega = np.concatenate([-positive[::-1], [0.0], positive])
    return SpectrumGrid(omega)
