"""Stochastic time-domain simulation of the output field."""

from .estimate import estimate_spectrum, restrict, segment_length, simulate_spectrum
from .simulate import (
    CovarianceEstimate,
    OutputSeries,
    TrajectoryConfig,
    max_step,
    noise_matrix,
    quadrature_drift,
    relaxation_rate,
    simulate_output,
    stationary_covariance,
)

__all__ = [
    "CovarianceEstimate",
    "OutputSeries",
    "TrajectoryConfig",
    "estimate_spectrum",
    "max_step",
    "noise_matrix",
    "quadrature_drift",
    "relaxation_rate",
    "restrict",
    "segment_length",
    "simulate_output",
    "simulate_spectrum",
    "stationary_covariance",
]
