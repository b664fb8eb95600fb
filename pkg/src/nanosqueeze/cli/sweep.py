"""Parameter sweeps over a worker pool.

Rows are dispatched with ``multiprocess.Pool.imap`` so results come back in
row order whatever order the workers finish in. ``NANOSQUEEZE_WORKERS`` sets
the pool size; 1 (the default) evaluates in-process.
"""

import cmath
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from multiprocess import Pool

from ..errors import ConfigError, NanosqueezeError
from ..model.drift import build_drift
from ..model.drive import DriveMode
from ..model.stability import stability
from ..params.types import EffectiveParams
from ..spectra.grid import make_grid
from ..spectra.output import output_spectrum
from ..steadystate.moments import solve_steady_moments
from ..steadystate.squeezing import optimal_phases, quadrature_squeezing
from .config import GridSpec

logger = logging.getLogger(__name__)

WORKERS_ENV = "NANOSQUEEZE_WORKERS"

STATUS_OK = "ok"
STATUS_NEAR = "near-threshold"
STATUS_UNSTABLE = "unstable"
STATUS_ERROR = "error"


@dataclass(frozen=True)
class SweepTask:
    row_index: int
    parameter: str
    value: float
    effective: EffectiveParams
    mode: DriveMode
    theta: Optional[float]
    phi: Optional[float]
    grid: Optional[GridSpec]


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ConfigError(
            f"{WORKERS_ENV} must be an integer, got {raw!r}", [WORKERS_ENV]
        )
    return max(1, count)


def _row_params(task: SweepTask) -> Tuple[EffectiveParams, Optional[float]]:
    if task.parameter == "theta":
        return task.effective, task.value
    if task.parameter == "chi":
        base = task.effective.chi
        phase = cmath.phase(base) if base != 0 else 0.0
        chi = task.value * cmath.exp(1j * phase)
        return task.effective.with_updates(chi=chi), task.theta
    return task.effective.with_updates(**{task.parameter: task.value}), task.theta


def evaluate_row(
    task: SweepTask,
) -> Tuple[Dict[str, Any], Optional[Dict[str, np.ndarray]]]:
    """Stability, moments, squeezing and (with a grid) the output spectrum.

    Returns:
        The row record and, for stable rows with a grid, the spectrum columns
    """
    row: Dict[str, Any] = {"row_index": task.row_index, "value": task.value}
    try:
        params, theta = _row_params(task)
        arg_chi = cmath.phase(params.chi) if params.chi != 0 else 0.0
        phases = optimal_phases(task.mode, arg_chi)
        theta = phases.theta if theta is None else theta
        phi = phases.phi if task.phi is None else task.phi
        row.update(theta=theta, phi=phi)

        report = stability(params, task.mode)
        row["max_real_eigenvalue"] = report.max_real_eigenvalue
        if not report.stable:
            row.update(status=STATUS_UNSTABLE, condition="; ".join(report.violated()))
            return row, None

        model = build_drift(params, task.mode)
        moments = solve_steady_moments(model)
        squeezing = quadrature_squeezing(moments.mechanics, phi)
        row.update(
            status=STATUS_NEAR if moments.near_threshold else STATUS_OK,
            S_Ym=squeezing.S_Y,
            S_Xm=squeezing.S_X,
            bdb=moments.bdb,
            ada=moments.ada,
            condition_number=moments.condition_number,
        )
        if task.grid is None:
            return row, None
        grid = make_grid(params, task.grid.points, task.grid.span, task.grid.densify)
        spectrum = output_spectrum(model, theta, grid)
        lowest = spectrum.minimum()
        row.update(S_s_min=lowest["S_squeezed"], omega_min=lowest["omega"])
        return row, spectrum.columns()
    except NanosqueezeError as e:
        row.update(status=STATUS_ERROR, error=str(e))
        return row, None


def run_sweep(tasks: List[SweepTask], workers: Optional[int] = None) -> List[Tuple]:
    """Evaluate every task; results are in task order."""
    workers = worker_count() if workers is None else workers
    logger.info("sweeping %d rows on %d worker(s)", len(tasks), workers)
    if workers <= 1 or len(tasks) <= 1:
        return [evaluate_row(t) for t in tasks]
    with Pool(processes=workers) as pool:
        return list(pool.imap(evaluate_row, tasks))


def build_tasks(
    parameter: str,
    values: np.ndarray,
    effective: EffectiveParams,
    mode: DriveMode,
    theta: Optional[float],
    phi: Optional[float],
    grid: Optional[GridSpec],
) -> List[SweepTask]:
    return [
        SweepTask(i, parameter, float(v), effective, mode, theta, phi, grid)
        for i, v in enumerate(values)
    ]


def failed_rows(rows: List[Dict[str, Any]]) -> List[int]:
    """Indices of rows that raised; unstable rows are results, not failures."""
    return [r["row_index"] for r in rows if r["status"] == STATUS_ERROR]
