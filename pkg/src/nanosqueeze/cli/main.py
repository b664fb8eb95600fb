"""``nanosqueeze`` command-line entry point."""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from .. import __version__
from ..database import finish_run, init_database, save_run
from ..errors import ConfigError, NanosqueezeError
from .commands import (
    EXIT_CONFIG,
    EXIT_FAILED,
    EXIT_OK,
    CommandContext,
    cmd_derive,
    cmd_oracle,
    cmd_reproduce_figure,
    cmd_simulate,
    cmd_spectrum,
    cmd_stability,
    cmd_steady,
    cmd_sweep,
)
from .config import apply_overrides, load_config, missing_for, resolve
from .presets import PRESETS

logger = logging.getLogger(__name__)

OVERRIDES = (
    "mode",
    "psi",
    "theta",
    "phi",
    "g",
    "chi",
    "gamma",
    "mu_ext",
    "mu_int",
    "n_m0",
    "scale",
    "output",
    "format",
    "seed",
)
RANGE = ("START", "STOP", "N")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config", help="JSON run configuration (or a .meta.json sidecar)"
    )
    parser.add_argument("--mode", choices=["blue", "red", "blue_red"])
    parser.add_argument(
        "--psi", type=float, help="relative phase of the two drives (rad)"
    )
    parser.add_argument("--theta", type=float, help="local-oscillator phase (rad)")
    parser.add_argument(
        "--phi", type=float, help="nanoresonator quadrature phase (rad)"
    )
    parser.add_argument("--g", type=float)
    parser.add_argument("--chi", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--mu-ext", dest="mu_ext", type=float)
    parser.add_argument("--mu-int", dest="mu_int", type=float)
    parser.add_argument("--n-m0", dest="n_m0", type=float)
    parser.add_argument(
        "--scale", choices=["abs", "mu"], help="units of the rate flags"
    )
    parser.add_argument("--output", help="output path prefix")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--json", action="store_true", help="machine-readable stdout")
    parser.add_argument("--archive", help="DuckDB run archive to record into")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanosqueeze",
        description=(
            "Squeezing of a parametrically driven nanoresonator "
            "read out through a microwave cavity."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("derive", help="physical to effective parameters"))

    stability = sub.add_parser("stability", help="stability report or (g, chi) map")
    _common(stability)
    stability.add_argument("--g-range", nargs=3, type=float, metavar=RANGE)
    stability.add_argument("--chi-range", nargs=3, type=float, metavar=RANGE)

    _common(sub.add_parser("steady", help="steady-state moments and squeezing"))

    spectrum = sub.add_parser("spectrum", help="output squeezing spectra")
    _common(spectrum)
    spectrum.add_argument(
        "--gain", type=float, help="phase-insensitive amplifier gain A"
    )
    spectrum.add_argument("--added-noise", type=float, help="amplifier added noise n_a")

    sweep = sub.add_parser("sweep", help="one row per value of a swept parameter")
    _common(sweep)
    sweep.add_argument(
        "--spectra", action="store_true", help="also write the spectrum map"
    )

    simulate = sub.add_parser("simulate", help="stochastic output trajectories")
    _common(simulate)
    simulate.add_argument(
        "--series",
        action="store_true",
        help="write the first record's output samples",
    )

    oracle = sub.add_parser(
        "oracle", help="analytic vs moment solver vs master equations"
    )
    _common(oracle)
    oracle.add_argument(
        "--trajectory", action="store_true", help="add the stochastic estimate"
    )

    figure = sub.add_parser("reproduce-figure", help="spectrum maps of a figure preset")
    _common(figure)
    figure.add_argument("figure", choices=sorted(PRESETS))
    figure.add_argument("--steps", type=int, help="sweep values per map")
    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.WARNING
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _dispatch(
    args: argparse.Namespace, doc: Dict[str, Any], ctx: CommandContext
) -> int:
    if args.command == "reproduce-figure":
        overrides = {k: getattr(args, k) for k in ("output", "format", "seed")}
        return cmd_reproduce_figure(args.figure, ctx, overrides, args.steps)

    cfg = resolve(doc)
    missing = missing_for(args.command, cfg)
    if missing:
        raise ConfigError(f"{args.command} needs more configuration", missing)

    if args.command == "derive":
        return cmd_derive(cfg, ctx)
    if args.command == "stability":
        stored = doc.get("stability_map") or {}
        g_range = args.g_range or stored.get("g") or None
        chi_range = args.chi_range or stored.get("chi") or None
        scaled = (doc.get("effective") or {}).get("scale") == "mu"
        unit = stored.get("unit", cfg.effective.mu_ext if scaled else 1.0)
        return cmd_stability(cfg, ctx, g_range, chi_range, unit)
    if args.command == "steady":
        return cmd_steady(cfg, ctx)
    if args.command == "spectrum":
        amplifier = doc.get("amplifier") or {}
        gain = args.gain if args.gain is not None else amplifier.get("gain")
        added = args.added_noise
        if added is None:
            added = amplifier.get("added_noise", 0.0)
        return cmd_spectrum(cfg, ctx, gain, added)
    if args.command == "sweep":
        return cmd_sweep(cfg, ctx, with_spectra=args.spectra)
    if args.command == "simulate":
        return cmd_simulate(cfg, ctx, write_series=args.series)
    if args.command == "oracle":
        return cmd_oracle(cfg, ctx, with_trajectory=args.trajectory)
    raise ConfigError(f"unknown command {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; the return value is the process exit code.

    Exit codes: 0 success, 1 a computation failed, 2 invalid configuration,
    3 a sweep finished with failed rows.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    ctx = CommandContext(command=args.command, machine=args.json)
    code = EXIT_FAILED
    try:
        overrides = {k: getattr(args, k) for k in OVERRIDES}
        doc = apply_overrides(load_config(args.config), overrides)
        if args.archive:
            ctx.archive = init_database(args.archive)
            ctx.run_id = save_run(ctx.archive, args.command, __version__, doc)
        code = _dispatch(args, doc, ctx)
    except ConfigError as e:
        print(f"nanosqueeze {args.command}: configuration error: {e}", file=sys.stderr)
        code = EXIT_CONFIG
    except NanosqueezeError as e:
        print(f"nanosqueeze {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        code = EXIT_FAILED
    finally:
        if ctx.archive is not None:
            if ctx.run_id is not None:
                status = "ok" if code == EXIT_OK else f"exit {code}"
                finish_run(ctx.archive, ctx.run_id, status)
            ctx.archive.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
