"""Euler-Maruyama integration of the Langevin equations in real quadratures.

The symmetric-ordered classical analogue of the linear dynamics is simulated
for ``q = [X_a, P_a, X_b, P_b]`` with X = c + c†, P = -i(c - c†). Each input
port contributes two independent white noises of intensity 1 (vacuum) or
2n + 1 (thermal). The output quadrature is sampled in Itô form,
``y_k = √μ_ext X(θ)_k - ξ(θ)_k``, reusing the noise that drives the cavity.

``n_segments`` statistically independent records are integrated side by side.
Record ``r`` draws its noise for step batch ``j`` from a Philox stream keyed by
``(seed, r, j)``, so results do not depend on how the work is split.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from ..errors import InstabilityError, InsufficientDataError, ParameterError
from ..model.drift import DriftModel
from ..model.stability import stability

logger = logging.getLogger(__name__)

DT_FACTOR = 0.05
MIN_RELAXATION_TIMES = 50.0
BATCH_STEPS = 4096

_QUADRATURE_BLOCK = np.array([[1.0, 1.0], [-1j, 1j]])


@dataclass(frozen=True)
class TrajectoryConfig:
    """Integration and sampling settings.

    Attributes:
        dt: Integration step (s)
        duration: Retained simulated time summed over all records (s)
        n_segments: Number of independent records
        seed: Root seed of the counter-based generator
        burn_in: Discarded time at the start of each record (s)
        segment_points: Welch segment length; default half a record
    """

    dt: float
    duration: float
    n_segments: int = 16
    seed: int = 0
    burn_in: float = 0.0
    segment_points: Optional[int] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if not self.duration > 0:
            raise ParameterError(f"duration must be positive, got {self.duration}")
        if self.n_segments < 1:
            raise ParameterError(f"n_segments must be >= 1, got {self.n_segments}")
        if self.burn_in < 0:
            raise ParameterError(f"burn_in must be non-negative, got {self.burn_in}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if self.segment_points is not None and self.segment_points < 8:
            raise ParameterError("segment_points must be at least 8")

    @property
    def record_steps(self) -> int:
        return int(round(self.duration / self.n_segments / self.dt))

    @property
    def burn_in_steps(self) -> int:
        return int(round(self.burn_in / self.dt))

    @classmethod
    def for_model(
        cls,
        model: DriftModel,
        n_segments: int = 16,
        seed: int = 0,
        dt_fraction: float = 0.5,
        resolution: float = 0.125,
    ) -> "TrajectoryConfig":
        """Settings resolving the narrowest spectral feature of ``model``.

        Args:
            model: Drift model to simulate
            n_segments: Number of independent records
            seed: Root seed
            dt_fraction: dt as a fraction of the largest allowed step
            resolution: Frequency bin width relative to the slowest decay rate
        """
        dt = dt_fraction * max_step(model)
        slowest = relaxation_rate(model)
        segment_time = 2 * math.pi / (resolution * slowest)
        record_time = max(2 * segment_time, MIN_RELAXATION_TIMES / slowest / n_segments)
        return cls(
            dt=dt,
            duration=n_segments * record_time,
            n_segments=n_segments,
            seed=seed,
            burn_in=10.0 / slowest,
        )


@dataclass(frozen=True, eq=False)
class OutputSeries:
    """Sampled output quadratures, one row per record.

    Attributes:
        model: The simulated drift model
        dt: Sample spacing (s)
        theta: Local-oscillator phase
        x_out: X(θ) output samples, shape (records, steps)
        y_out: Y(θ) output samples, same shape
        state_moments: Time-averaged q qᵀ of each record, shape (records, 4, 4)
        state_means: Time-averaged q of each record, shape (records, 4)
    """

    model: DriftModel
    dt: float
    theta: float
    x_out: np.ndarray
    y_out: np.ndarray
    state_moments: np.ndarray
    state_means: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.x_out.shape[1]) * self.dt

    @property
    def n_records(self) -> int:
        return self.x_out.shape[0]


def quadrature_drift(model: DriftModel) -> np.ndarray:
    """Real drift matrix R = Re(U M U⁻¹) of the quadrature vector."""
    U = scipy.linalg.block_diag(_QUADRATURE_BLOCK, _QUADRATURE_BLOCK)
    R = U @ model.M @ np.linalg.inv(U)
    if np.max(np.abs(R.imag)) > 1e-9 * max(1.0, np.max(np.abs(R.real))):
        raise ParameterError("drift matrix does not map to real quadrature dynamics")
    return R.real


def noise_matrix(model: DriftModel) -> np.ndarray:
    """Columns: X and P noise of the external port, the mechanical bath, and
    the internal-loss port when present."""
    p = model.params
    columns = [
        (0, math.sqrt(p.mu_ext)),
        (1, math.sqrt(p.mu_ext)),
        (2, math.sqrt(p.gamma * (2 * p.n_m0 + 1))),
        (3, math.sqrt(p.gamma * (2 * p.n_m0 + 1))),
    ]
    if p.mu_int > 0:
        columns += [(0, math.sqrt(p.mu_int)), (1, math.sqrt(p.mu_int))]
    G = np.zeros((4, len(columns)))
    for column, (row, value) in enumerate(columns):
        G[row, column] = value
    return G


def max_step(model: DriftModel) -> float:
    """Largest dt accepted by ``simulate_output``."""
    p = model.params
    return DT_FACTOR / max(p.mu, p.gamma + 4 * abs(p.chi), 2 * p.g)


def relaxation_rate(model: DriftModel) -> float:
    """Slowest decay rate, the smallest |Re λ| of the drift matrix."""
    return float(np.min(np.abs(np.linalg.eigvals(model.M).real)))


def _stream(seed: int, record: int, batch: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(record, batch))
    return np.random.Generator(np.random.Philox(sequence))


def _check(model: DriftModel, cfg: TrajectoryConfig) -> None:
    report = stability(model.params, model.mode)
    if not report.stable:
        violated = "; ".join(report.violated())
        raise InstabilityError(
            f"cannot simulate unstable {model.mode.label}: {violated}",
            condition=violated,
        )
    limit = max_step(model)
    if cfg.dt >= limit:
        raise ParameterError(
            f"dt = {cfg.dt:.3g} s is too large; need dt < {limit:.3g} s"
        )
    required = MIN_RELAXATION_TIMES / relaxation_rate(model)
    if cfg.duration < required:
        raise InsufficientDataError(
            "simulated duration is shorter than 50 relaxation times",
            required_duration=required,
        )


def simulate_output(
    model: DriftModel, theta: float, cfg: TrajectoryConfig
) -> OutputSeries:
    """Integrate the quadrature Langevin equations and sample the output.

    Args:
        model: Stable drift model
        theta: Local-oscillator phase
        cfg: Integration settings

    Returns:
        Output samples of both quadratures plus per-record state statistics

    Raises:
        InstabilityError: The model is unstable
        ParameterError: dt is above the bias-control limit
        InsufficientDataError: The duration is below 50 relaxation times
    """
    _check(model, cfg)
    dt = cfg.dt
    F = np.eye(4) + quadrature_drift(model) * dt
    G = noise_matrix(model)
    n_noise = G.shape[1]
    records = cfg.n_segments
    burn, keep = cfg.burn_in_steps, cfg.record_steps
    total = burn + keep

    root_ext = math.sqrt(model.params.mu_ext)
    cos, sin = math.cos(theta), math.sin(theta)
    x_out = np.empty((records, keep))
    y_out = np.empty((records, keep))
    moments = np.zeros((records, 4, 4))
    means = np.zeros((records, 4))

    q = np.zeros((records, 4))
    step = 0
    for batch in range((total + BATCH_STEPS - 1) // BATCH_STEPS):
        size = min(BATCH_STEPS, total - step)
        draws = [
            _stream(cfg.seed, r, batch).standard_normal((size, n_noise))
            for r in range(records)
        ]
        noise = np.stack(draws, axis=1)
        noise *= math.sqrt(dt)
        for k in range(size):
            dW = noise[k]
            index = step - burn
            if index >= 0:
                xi_x = dW[:, 0] / dt
                xi_p = dW[:, 1] / dt
                x_out[:, index] = root_ext * (cos * q[:, 0] + sin * q[:, 1]) - (
                    cos * xi_x + sin * xi_p
                )
                y_out[:, index] = root_ext * (-sin * q[:, 0] + cos * q[:, 1]) - (
                    -sin * xi_x + cos * xi_p
                )
                moments += q[:, :, None] * q[:, None, :]
                means += q
            q = q @ F.T + dW @ G.T
            step += 1
    logger.debug("simulated %d records of %d steps (burn-in %d)", records, keep, burn)

    return OutputSeries(
        model=model,
        dt=dt,
        theta=theta,
        x_out=x_out,
        y_out=y_out,
        state_moments=moments / keep,
        state_means=means / keep,
    )


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    """Batch-means estimate of the symmetric-ordered quadrature covariance."""

    covariance: np.ndarray
    stderr: np.ndarray
    mean: np.ndarray
    mean_stderr: np.ndarray


def stationary_covariance(series: OutputSeries) -> CovarianceEstimate:
    """Covariance of ``[X_a, P_a, X_b, P_b]`` with one batch per record.

    Requires at least two records for the error bars.
    """
    if series.n_records < 2:
        raise InsufficientDataError(
            "batch means need at least two records",
            required_duration=2 * series.x_out.shape[1] * series.dt,
        )
    means = series.state_means
    batches = series.state_moments - means[:, :, None] * means[:, None, :]
    n = series.n_records
    return CovarianceEstimate(
        covariance=batches.mean(axis=0),
        stderr=batches.std(axis=0, ddof=1) / math.sqrt(n),
        mean=series.state_means.mean(axis=0),
        mean_stderr=series.state_means.std(axis=0, ddof=1) / math.sqrt(n),
    )
