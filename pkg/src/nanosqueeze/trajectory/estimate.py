"""Welch estimate of the output spectra from simulated records."""

import logging
import math
from typing import Optional, Tuple

import numpy as np
import scipy.signal

from ..constants import TWO_PI, VACUUM_FLOOR
from ..errors import InsufficientDataError
from ..model.drift import DriftModel
from ..spectra.types import SpectrumGrid, SpectrumResult
from .simulate import OutputSeries, TrajectoryConfig, simulate_output

logger = logging.getLogger(__name__)


def segment_length(series: OutputSeries, cfg: TrajectoryConfig) -> int:
    """Welch segment length in samples, even so that ω = 0 is a bin."""
    points = cfg.segment_points or series.x_out.shape[1] // 2
    return points - points % 2


def _periodograms(
    samples: np.ndarray, fs: float, nperseg: int
) -> Tuple[np.ndarray, np.ndarray, int]:
    freqs, _, sxx = scipy.signal.spectrogram(
        samples,
        fs=fs,
        window="hann",
        nperseg=nperseg,
        noverlap=nperseg // 2,
        detrend=False,
        return_onesided=False,
        scaling="density",
        axis=-1,
    )
    # (records, freqs, windows) -> (freqs, records), one Welch average per record
    per_record = sxx.mean(axis=-1).T
    order = np.argsort(freqs)
    return freqs[order], per_record[order], sxx.shape[-1]


def estimate_spectrum(series: OutputSeries, cfg: TrajectoryConfig) -> SpectrumResult:
    """Welch spectra averaged over records with the vacuum floor removed.

    The two-sided density of white noise with unit intensity is 1 on this
    scale, so subtracting 1 gives the normally ordered spectrum.

    Args:
        series: Simulated output records
        cfg: Settings used for the simulation

    Returns:
        Spectra with one standard error per bin, from the spread of the
        per-record Welch averages

    Raises:
        InsufficientDataError: Records too short for the segment length
    """
    nperseg = segment_length(series, cfg)
    available = series.x_out.shape[1]
    if nperseg < 8 or available < 2 * nperseg:
        raise InsufficientDataError(
            f"records of {available} samples cannot hold two segments of {nperseg}",
            required_duration=series.n_records * 2 * max(nperseg, 8) * series.dt,
        )

    fs = 1.0 / series.dt
    freqs, sxx_x, windows = _periodograms(series.x_out, fs, nperseg)
    _, sxx_y, _ = _periodograms(series.y_out, fs, nperseg)
    records = sxx_x.shape[1]
    logger.debug(
        "averaging %d records of %d windows, %d samples each",
        records,
        windows,
        nperseg,
    )

    def stderr(sxx: np.ndarray) -> Optional[np.ndarray]:
        # overlapping windows are correlated; only records are independent
        if records < 2:
            return None
        return sxx.std(axis=1, ddof=1) / math.sqrt(records)

    return SpectrumResult(
        grid=SpectrumGrid(TWO_PI * freqs),
        S_squeezed=sxx_x.mean(axis=1) - VACUUM_FLOOR,
        S_antisqueezed=sxx_y.mean(axis=1) - VACUUM_FLOOR,
        theta=series.theta,
        mode=series.model.mode,
        params=series.model.params,
        stderr_squeezed=stderr(sxx_x),
        stderr_antisqueezed=stderr(sxx_y),
    )


def simulate_spectrum(
    model: DriftModel, theta: float, cfg: TrajectoryConfig
) -> SpectrumResult:
    """``simulate_output`` followed by ``estimate_spectrum``."""
    return estimate_spectrum(simulate_output(model, theta, cfg), cfg)


def restrict(spectrum: SpectrumResult, limit: float) -> SpectrumResult:
    """Keep only bins with |ω| ≤ ``limit``."""
    keep = np.abs(spectrum.omega) <= limit

    def cut(values):
        return None if values is None else values[keep]

    return spectrum.with_values(
        grid=SpectrumGrid(spectrum.omega[keep]),
        S_squeezed=spectrum.S_squeezed[keep],
        S_antisqueezed=spectrum.S_antisqueezed[keep],
        stderr_squeezed=cut(spectrum.stderr_squeezed),
        stderr_antisqueezed=cut(spectrum.stderr_antisqueezed),
    )
