"""Subcommand implementations.

Each ``cmd_*`` takes a resolved ``RunConfig`` and a ``CommandContext`` and
returns an exit code. Results go to stdout through ``CommandContext.emit``;
data files through ``CommandContext.write``.
"""

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .. import __version__
from ..errors import NanosqueezeError, ParameterError
from ..database import save_file, save_oracle_rows, save_spectrum, save_sweep_rows
from ..model.drift import build_drift
from ..model.drive import DriveKind
from ..model.stability import analytic_conditions, stability, stability_threshold
from ..oracle.fock import full_me_steady
from ..oracle.reduced import ADIABATIC_LIMIT, reduced_me_steady
from ..params.derivation import (
    circulating_power,
    cooling_rate,
    derive_kappa,
    drive_photon_number,
    parametric_spring_amplitude,
    spring_constant_change,
    zero_point_width,
)
from ..params.feasibility import feasibility_report
from ..spectra.amplifier import amplifier_noise
from ..spectra.grid import make_grid
from ..spectra.integral import integrate_spectrum
from ..spectra.output import output_spectrum
from ..spectra.splitting import detect_normal_mode_splitting
from ..spectra.types import SpectrumGrid
from ..steadystate.moments import ModeMoments, solve_steady_moments
from ..steadystate.phonons import final_phonon_number
from ..steadystate.squeezing import (
    cavity_nanores_relation_check,
    closed_form_SYm,
    optimal_quadrature,
    quadrature_squeezing,
)
from ..trajectory.estimate import estimate_spectrum
from ..trajectory.simulate import (
    TrajectoryConfig,
    simulate_output,
    stationary_covariance,
)
from .config import RunConfig, apply_overrides, resolve
from .output import report, rows_to_columns, write_columns
from .presets import PRESET_VERSION, get_preset
from .sweep import build_tasks, failed_rows, run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_PARTIAL = 3

AGREEMENT_SIGMAS = 3.0


@dataclass
class CommandContext:
    """Per-invocation state shared by the subcommands.

    Attributes:
        command: Subcommand name
        machine: Emit JSON on stdout instead of ``key: value`` lines
        archive: Open DuckDB connection, or None
        run_id: Archive run of this invocation
        written: Every file written so far
    """

    command: str
    machine: bool = False
    archive: Any = None
    run_id: Optional[int] = None
    written: List[str] = field(default_factory=list)

    def emit(self, data: Dict[str, Any]) -> None:
        print(report(data, self.machine))

    def meta(self, cfg: RunConfig, **extra: Any) -> Dict[str, Any]:
        doc = cfg.to_dict()
        doc["command"] = self.command
        doc["code_version"] = __version__
        doc.update(extra)
        return doc

    def prefix(self, cfg: RunConfig, default: str) -> str:
        return cfg.output.path or default

    def write(
        self, prefix: str, columns: Dict[str, Sequence], meta: Dict[str, Any], fmt: str
    ) -> List[str]:
        paths = write_columns(prefix, columns, meta, fmt)
        self.written.extend(paths)
        if self.archive is not None:
            for path, kind in zip(paths, ("data", "meta")):
                save_file(self.archive, self.run_id, path, kind)
        return paths

    def archive_spectrum(self, series: str, columns: Dict[str, Sequence]) -> None:
        if self.archive is not None:
            save_spectrum(self.archive, self.run_id, series, columns)


def cmd_derive(cfg: RunConfig, ctx: CommandContext) -> int:
    """Physical → effective parameters with the feasibility report."""
    p, e = cfg.physical, cfg.effective
    delta_x = zero_point_width(p.mass, p.nu)
    k0 = parametric_spring_amplitude(p.C_c0, p.V0, p.VP, p.x_c0)
    n_d = drive_photon_number(p.E_drive, p.nu)
    feasibility = feasibility_report(p, e, cfg.mode)
    data = {
        "delta_x_m": delta_x,
        "kappa": derive_kappa(p.beta, p.omega_c, delta_x, p.d),
        "g": e.g,
        "chi": abs(e.chi),
        "mu": e.mu,
        "mu_ext": e.mu_ext,
        "mu_int": e.mu_int,
        "gamma": e.gamma,
        "n_m0": e.n_m0,
        "g_over_mu": e.g / e.mu,
        "chi_over_mu": abs(e.chi) / e.mu,
        "n_d": n_d,
        "P_circ_W": circulating_power(n_d, p.omega_c),
        "k0": k0,
        "V0_VP": p.V0 * p.VP,
        "spring_constant_change": spring_constant_change(k0, p.mass, p.nu),
        "cooling_rate": cooling_rate(e.g, e.mu),
        "feasibility": feasibility.to_dict(),
    }
    ctx.emit(data)
    if cfg.output.path:
        scalar = {k: [v] for k, v in data.items() if k != "feasibility"}
        ctx.write(cfg.output.path, scalar, ctx.meta(cfg), cfg.output.format)
    return EXIT_OK


def cmd_stability(
    cfg: RunConfig,
    ctx: CommandContext,
    g_range: Optional[Sequence[float]] = None,
    chi_range: Optional[Sequence[float]] = None,
    unit: float = 1.0,
) -> int:
    """Stability at the configured point, or a boolean map over (g, χ)."""
    e, mode = cfg.effective, cfg.mode
    if g_range is None and chi_range is None:
        result = stability(e, mode)
        ctx.emit(
            {
                "mode": mode.label,
                "stable": result.stable,
                "analytic_pass": result.analytic_pass,
                "max_real_eigenvalue": result.max_real_eigenvalue,
                "chi_threshold": stability_threshold(e, mode),
                "conditions": [
                    {
                        "label": c.label,
                        "value": c.value,
                        "bound": c.bound,
                        "passed": c.passed,
                    }
                    for c in analytic_conditions(e, mode)
                ],
            }
        )
        return EXIT_OK

    def axis(spec, current):
        if spec is None:
            return np.array([current])
        start, stop, steps = spec
        return np.linspace(start, stop, int(steps)) * unit

    g_values = axis(g_range, e.g)
    chi_values = axis(chi_range, abs(e.chi))
    columns: Dict[str, List] = {
        "g": [],
        "chi": [],
        "analytic_stable": [],
        "eigenvalue_stable": [],
        "max_real_eigenvalue": [],
    }
    disagreements = 0
    for g in g_values:
        for chi in chi_values:
            result = stability(e.with_updates(g=float(g), chi=complex(chi)), mode)
            columns["g"].append(float(g))
            columns["chi"].append(float(chi))
            columns["analytic_stable"].append(int(result.analytic_pass))
            columns["eigenvalue_stable"].append(int(result.stable))
            columns["max_real_eigenvalue"].append(result.max_real_eigenvalue)
            disagreements += result.disagreement
    prefix = ctx.prefix(cfg, "stability_map")
    meta = ctx.meta(
        cfg,
        stability_map={
            "g": list(g_range or []),
            "chi": list(chi_range or []),
            "unit": unit,
        },
    )
    ctx.write(prefix, columns, meta, cfg.output.format)
    ctx.emit(
        {
            "points": len(columns["g"]),
            "stable_points": sum(columns["eigenvalue_stable"]),
            "criteria_disagreements": disagreements,
        }
    )
    return EXIT_OK


def cmd_steady(cfg: RunConfig, ctx: CommandContext) -> int:
    """Steady-state moments and nanoresonator squeezing."""
    e, mode = cfg.effective, cfg.mode
    moments = solve_steady_moments(build_drift(e, mode))
    phi = cfg.resolved_phi
    squeezing = quadrature_squeezing(moments.mechanics, phi)
    best = optimal_quadrature(moments.mechanics)
    data: Dict[str, Any] = {
        "mode": mode.label,
        "phi": phi,
        "S_Ym": squeezing.S_Y,
        "S_Xm": squeezing.S_X,
        "best_S": best.S_X,
        "best_phi": best.phi,
        "S_Xc": quadrature_squeezing(moments.cavity, phi).S_X,
        "physical": moments.is_physical(),
        "moments": moments.to_dict(),
    }
    try:
        data["S_Ym_closed_form"] = closed_form_SYm(e, mode)
    except ParameterError as err:
        logger.info("closed form not applicable: %s", err)
    try:
        data["final_phonon_number"] = final_phonon_number(e, mode)
    except NanosqueezeError as err:
        logger.info("final phonon number not available: %s", err)
    if mode.kind is DriveKind.RED and e.chi_is_real:
        relation = cavity_nanores_relation_check(e)
        data["cavity_relation"] = {
            "S_Xc": relation.S_Xc,
            "correction": relation.correction,
            "residual": relation.residual,
            "bath_bound": relation.bath_bound,
            "bath_condition": relation.bath_condition,
        }
    if moments.near_threshold:
        logger.warning("operating point is near threshold")
    ctx.emit(data)
    if cfg.output.path:
        row = {k: [v] for k, v in data.items() if not isinstance(v, dict)}
        row.update({k: [v] for k, v in moments.to_dict().items()})
        ctx.write(cfg.output.path, row, ctx.meta(cfg), cfg.output.format)
    return EXIT_OK


def cmd_spectrum(
    cfg: RunConfig,
    ctx: CommandContext,
    gain: Optional[float] = None,
    added_noise: float = 0.0,
) -> int:
    """Output squeezing spectra on the configured grid."""
    e, mode = cfg.effective, cfg.mode
    theta = cfg.resolved_theta
    grid = make_grid(e, cfg.grid.points, cfg.grid.span, cfg.grid.densify)
    spectrum = output_spectrum(build_drift(e, mode), theta, grid)
    summary: Dict[str, Any] = {"mode": mode.label, "theta": theta, **spectrum.minimum()}
    try:
        summary["intracavity_S_X"] = integrate_spectrum(spectrum)
    except NanosqueezeError as err:
        logger.warning("spectrum integral skipped: %s", err)
    if mode.kind is DriveKind.RED and e.chi_is_real:
        splitting = detect_normal_mode_splitting(e, theta)
        summary["normal_mode_splitting"] = splitting.split
        summary["minima"] = splitting.found_minima
    extra: Dict[str, Any] = {}
    if gain is not None:
        spectrum = amplifier_noise(spectrum, gain, added_noise)
        extra["amplifier"] = {"gain": gain, "added_noise": added_noise}
        summary.update(extra)

    columns = spectrum.columns()
    prefix = ctx.prefix(cfg, "spectrum")
    ctx.write(prefix, columns, ctx.meta(cfg, **extra), cfg.output.format)
    ctx.archive_spectrum("spectrum", columns)
    ctx.emit(summary)
    return EXIT_OK


def _sweep_rows(cfg: RunConfig, with_spectra: bool):
    sweep = cfg.sweep
    tasks = build_tasks(
        sweep.parameter,
        sweep.values(),
        cfg.effective,
        cfg.mode,
        cfg.theta,
        cfg.phi,
        cfg.grid if with_spectra else None,
    )
    results = run_sweep(tasks)
    return [r for r, _ in results], [s for _, s in results]


def _map_columns(rows, spectra) -> Dict[str, List]:
    names = ("value", "omega_rad_s", "S_squeezed", "S_antisqueezed")
    columns: Dict[str, List] = {n: [] for n in names}
    for row, spec in zip(rows, spectra):
        if spec is None:
            continue
        n = len(spec["omega_rad_s"])
        columns["value"].extend([row["value"]] * n)
        columns["omega_rad_s"].extend(spec["omega_rad_s"])
        columns["S_squeezed"].extend(spec["S_squeezed"])
        columns["S_antisqueezed"].extend(spec["S_antisqueezed"])
    return columns


def _finish_sweep(
    cfg: RunConfig, ctx: CommandContext, prefix: str, rows, spectra, meta
) -> int:
    ctx.write(f"{prefix}_rows", rows_to_columns(rows), meta, cfg.output.format)
    if any(s is not None for s in spectra):
        ctx.write(f"{prefix}_map", _map_columns(rows, spectra), meta, cfg.output.format)
    if ctx.archive is not None:
        save_sweep_rows(ctx.archive, ctx.run_id, cfg.sweep.parameter, rows)
    failed = failed_rows(rows)
    counts: Dict[str, int] = {}
    for row in rows:
        counts[row["status"]] = counts.get(row["status"], 0) + 1
    ctx.emit(
        {"prefix": prefix, "rows": len(rows), "status": counts, "failed_rows": failed}
    )
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_sweep(cfg: RunConfig, ctx: CommandContext, with_spectra: bool = False) -> int:
    """One row per sweep value; optionally the spectrum map as well."""
    rows, spectra = _sweep_rows(cfg, with_spectra)
    prefix = ctx.prefix(cfg, "sweep")
    return _finish_sweep(cfg, ctx, prefix, rows, spectra, ctx.meta(cfg))


def cmd_reproduce_figure(
    name: str, ctx: CommandContext, overrides=None, steps: Optional[int] = None
) -> int:
    """Spectrum maps of a figure preset, one pair of files per bath occupation."""
    preset = get_preset(name)
    code = EXIT_OK
    for label, doc in preset.documents() if steps is None else preset.documents(steps):
        cfg = resolve(apply_overrides(doc, overrides or {}))
        prefix = ctx.prefix(cfg, name)
        if label is not None:
            prefix = f"{prefix}_n{label:g}"
        rows, spectra = _sweep_rows(cfg, with_spectra=True)
        stamp = {"name": name, "version": PRESET_VERSION, "caption": preset.caption}
        meta = ctx.meta(cfg, preset=stamp)
        code = max(code, _finish_sweep(cfg, ctx, prefix, rows, spectra, meta))
    return code


def trajectory_config(cfg: RunConfig, model) -> TrajectoryConfig:
    """Model-derived defaults with the explicitly configured fields applied."""
    settings = dict(cfg.trajectory)
    settings.setdefault("seed", cfg.seed)
    base = TrajectoryConfig.for_model(
        model,
        n_segments=int(settings.get("n_segments", 16)),
        seed=int(settings["seed"]),
    )
    known = {f.name for f in fields(TrajectoryConfig)}
    return replace(base, **{k: v for k, v in settings.items() if k in known})


def _within(spectrum, analytic, limit: float) -> float:
    keep = np.abs(spectrum.omega) <= limit
    err = spectrum.stderr_squeezed[keep]
    deviation = np.abs(spectrum.S_squeezed[keep] - analytic[keep])
    return float(np.mean(deviation <= AGREEMENT_SIGMAS * err))


def cmd_simulate(
    cfg: RunConfig, ctx: CommandContext, write_series: bool = False
) -> int:
    """Euler-Maruyama output spectra compared with the analytic ones."""
    e, mode = cfg.effective, cfg.mode
    theta = cfg.resolved_theta
    model = build_drift(e, mode)
    tcfg = trajectory_config(cfg, model)
    series = simulate_output(model, theta, tcfg)
    estimate = estimate_spectrum(series, tcfg)
    analytic = output_spectrum(model, theta, SpectrumGrid(estimate.omega))

    columns = estimate.columns()
    columns["S_analytic"] = analytic.S_squeezed
    resolved = {f.name: getattr(tcfg, f.name) for f in fields(TrajectoryConfig)}
    meta = ctx.meta(cfg, trajectory=resolved)
    prefix = ctx.prefix(cfg, "simulate")
    ctx.write(prefix, columns, meta, cfg.output.format)
    ctx.archive_spectrum("trajectory", estimate.columns())
    if write_series:
        samples = {"t_s": series.t, "x_out": series.x_out[0]}
        ctx.write(f"{prefix}_series", samples, meta, cfg.output.format)

    ctx.emit(
        {
            "mode": mode.label,
            "theta": theta,
            "trajectory": resolved,
            "segments": tcfg.n_segments,
            "fraction_within_3_sigma": _within(estimate, analytic.S_squeezed, 5 * e.mu),
            "output_mean": float(np.mean(series.x_out)),
        }
    )
    return EXIT_OK


def moments_from_covariance(V: np.ndarray) -> Dict[str, Any]:
    """Normally ordered moments from the symmetric quadrature covariance."""
    return {
        "ada": (V[0, 0] + V[1, 1] - 2.0) / 4.0,
        "bdb": (V[2, 2] + V[3, 3] - 2.0) / 4.0,
        "b2": complex(V[2, 2] - V[3, 3], 2.0 * V[2, 3]) / 4.0,
    }


def _oracle_rows(cfg: RunConfig, with_trajectory: bool) -> List[Dict[str, Any]]:
    e, mode = cfg.effective, cfg.mode
    phi = cfg.resolved_phi
    model = build_drift(e, mode)
    gaussian = solve_steady_moments(model)
    full = full_me_steady(e, mode, cfg.fock).moments

    def squeezing(b2, bdb):
        return quadrature_squeezing(ModeMoments(square=b2, number=bdb), phi).S_Y

    table = {
        "bdb": {"moment_solver": gaussian.bdb, "fock_full": full.bdb},
        "abs_b2": {"moment_solver": abs(gaussian.b2), "fock_full": abs(full.b2)},
        "ada": {"moment_solver": gaussian.ada, "fock_full": full.ada},
        "S_Ym": {
            "moment_solver": squeezing(gaussian.b2, gaussian.bdb),
            "fock_full": squeezing(full.b2, full.bdb),
        },
    }
    try:
        table["S_Ym"]["analytic"] = closed_form_SYm(e, mode)
    except ParameterError as err:
        logger.info("no closed form: %s", err)
    if e.chi == 0:
        table["bdb"]["analytic"] = final_phonon_number(e, mode)
    if e.epsilon <= ADIABATIC_LIMIT:
        reduced = reduced_me_steady(e, mode, cfg.fock)
        table["bdb"]["fock_reduced"] = reduced.bdb
        table["abs_b2"]["fock_reduced"] = abs(reduced.moments.square)
        table["S_Ym"]["fock_reduced"] = squeezing(reduced.moments.square, reduced.bdb)
    if with_trajectory:
        tcfg = trajectory_config(cfg, model)
        series = simulate_output(model, cfg.resolved_theta, tcfg)
        estimate = stationary_covariance(series)
        simulated = moments_from_covariance(estimate.covariance)
        table["bdb"]["trajectory"] = simulated["bdb"]
        table["abs_b2"]["trajectory"] = abs(simulated["b2"])
        table["ada"]["trajectory"] = simulated["ada"]
        table["S_Ym"]["trajectory"] = squeezing(simulated["b2"], simulated["bdb"])
    return [{"quantity": q, **values} for q, values in table.items()]


def cmd_oracle(
    cfg: RunConfig, ctx: CommandContext, with_trajectory: bool = False
) -> int:
    """Agreement table: closed forms, moment solver, master equations, trajectories."""
    rows = _oracle_rows(cfg, with_trajectory)
    for row in rows:
        reference = row["moment_solver"]
        deviations = [
            abs(v - reference)
            for k, v in row.items()
            if k not in ("quantity", "moment_solver") and v is not None
        ]
        row["max_abs_deviation"] = max(deviations) if deviations else 0.0
    if ctx.archive is not None:
        save_oracle_rows(ctx.archive, ctx.run_id, rows)
    prefix = ctx.prefix(cfg, "oracle")
    ctx.write(prefix, rows_to_columns(rows), ctx.meta(cfg), cfg.output.format)
    ctx.emit({"epsilon": cfg.effective.epsilon, "rows": rows})
    return EXIT_OK
