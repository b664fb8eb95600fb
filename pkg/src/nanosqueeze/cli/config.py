"""Run configuration: JSON document, flag overrides, resolution to typed records.

A resolved ``RunConfig`` serialises back to a document (``to_dict``) that
resolves to the same numbers, which is what the ``.meta.json`` sidecars hold.
"""

import cmath
import copy
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from ..errors import ConfigError
from ..model.drive import DriveMode
from ..oracle.fock import FockConfig
from ..params.derivation import derive_effective
from ..params.types import EffectiveParams, PhysicalParams
from ..params.units import parse_angular_frequency
from ..spectra.grid import DEFAULT_POINTS
from ..steadystate.squeezing import OptimalPhases, optimal_phases

logger = logging.getLogger(__name__)

PHYSICAL_FREQUENCIES = ("omega_c", "nu")
PHYSICAL_REQUIRED = (
    "omega_c",
    "nu",
    "mass",
    "beta",
    "d",
    "C_c0",
    "x_c0",
    "V0",
    "VP",
    "E_drive",
    "Q_cavity",
    "Q_mech",
)
EFFECTIVE_FIELDS = ("g", "chi", "gamma", "mu_ext", "mu_int", "n_m0")
EFFECTIVE_REQUIRED = ("g", "chi", "gamma", "mu_ext")
# Rates given in units of mu_ext when effective.scale == "mu"
MU_SCALED = ("g", "chi", "gamma", "mu_int")
SWEEPABLE = EFFECTIVE_FIELDS + ("theta",)
TOP_LEVEL = (
    "physical",
    "effective",
    "mode",
    "theta",
    "phi",
    "grid",
    "sweep",
    "fock",
    "trajectory",
    "output",
    "seed",
    "code_version",
    "command",
    "stability_map",
    "amplifier",
    "preset",
)
TRAJECTORY_FIELDS = (
    "dt",
    "duration",
    "n_segments",
    "seed",
    "burn_in",
    "segment_points",
)
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class GridSpec:
    points: int = DEFAULT_POINTS
    span: Optional[float] = None
    densify: bool = False


@dataclass(frozen=True)
class SweepSpec:
    """Linear sweep of one parameter.

    ``unit`` multiplies the linspace values; it is μ_ext for rates quoted in
    units of μ and 1 otherwise.
    """

    parameter: str
    start: float
    stop: float
    steps: int
    unit: float = 1.0

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps) * self.unit


@dataclass(frozen=True)
class OutputSpec:
    path: Optional[str] = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs, with units resolved to rad/s.

    ``theta`` and ``phi`` of None select the optimal phases for the drive.
    ``trajectory`` keeps only the explicitly given ``TrajectoryConfig`` fields;
    the rest are chosen from the model when a simulation runs.
    """

    effective: EffectiveParams
    mode: DriveMode
    physical: Optional[PhysicalParams] = None
    theta: Optional[float] = None
    phi: Optional[float] = None
    grid: GridSpec = field(default_factory=GridSpec)
    sweep: Optional[SweepSpec] = None
    fock: FockConfig = field(default_factory=FockConfig)
    trajectory: Dict[str, Any] = field(default_factory=dict)
    output: OutputSpec = field(default_factory=OutputSpec)
    seed: int = 0

    @property
    def phases(self) -> OptimalPhases:
        chi = self.effective.chi
        return optimal_phases(self.mode, math.atan2(chi.imag, chi.real))

    @property
    def resolved_theta(self) -> float:
        return self.phases.theta if self.theta is None else self.theta

    @property
    def resolved_phi(self) -> float:
        return self.phases.phi if self.phi is None else self.phi

    def to_dict(self) -> Dict[str, Any]:
        """Config document that resolves back to this record."""
        doc: Dict[str, Any] = {
            "effective": self.effective.to_dict(),
            "mode": self.mode.to_dict(),
            "theta": self.resolved_theta,
            "phi": self.resolved_phi,
            "grid": asdict(self.grid),
            "fock": asdict(self.fock),
            "trajectory": dict(self.trajectory),
            "output": asdict(self.output),
            "seed": self.seed,
        }
        doc["effective"]["scale"] = "abs"
        if self.physical is not None:
            doc["physical"] = self.physical.to_dict()
        if self.sweep is not None:
            doc["sweep"] = asdict(self.sweep)
        return doc


def load_config(path: Optional[str]) -> Dict[str, Any]:
    """Read a JSON config document; an absent path gives an empty document."""
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON ({e})") from e
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return doc


def apply_overrides(
    doc: Mapping[str, Any], overrides: Mapping[str, Any]
) -> Dict[str, Any]:
    """Return a copy of ``doc`` with command-line values applied.

    Keys of ``overrides`` are the option destinations (``g``, ``mu_ext``,
    ``mode``, ``psi``, ``theta``, ``phi``, ``output``, ``format``, ``seed``,
    ``scale``); None means "not given".
    """
    doc = copy.deepcopy(dict(doc))
    given = {k: v for k, v in overrides.items() if v is not None}

    effective = {k: given[k] for k in EFFECTIVE_FIELDS if k in given}
    if "scale" in given:
        effective["scale"] = given["scale"]
    if effective:
        doc.setdefault("effective", {}).update(effective)

    if "mode" in given or "psi" in given:
        current = doc.get("mode")
        kind = given.get("mode")
        if kind is None:
            kind = current.get("kind") if isinstance(current, dict) else current
        mode: Any = kind
        if "psi" in given:
            mode = {"kind": kind, "psi": given["psi"]}
        elif isinstance(current, dict) and current.get("kind") == kind:
            mode = current
        doc["mode"] = mode

    for key in ("theta", "phi", "seed"):
        if key in given:
            doc[key] = given[key]
    if "output" in given:
        doc.setdefault("output", {})["path"] = given["output"]
    if "format" in given:
        doc.setdefault("output", {})["format"] = given["format"]
    return doc


def _unknown(section: Mapping[str, Any], allowed, where: str) -> None:
    extra = sorted(set(section) - set(allowed))
    if extra:
        raise ConfigError(f"unknown fields in {where}", extra)


def _parse_chi(value: Any) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, Mapping):
        if set(value) <= {"re", "im"}:
            return complex(value.get("re", 0.0), value.get("im", 0.0))
        if set(value) == {"abs", "arg"}:
            return value["abs"] * cmath.exp(1j * value["arg"])
    raise ConfigError("chi must be a number, {re, im} or {abs, arg}", ["effective.chi"])


def _physical(section: Mapping[str, Any]) -> PhysicalParams:
    allowed = [f.name for f in fields(PhysicalParams)]
    _unknown(section, allowed, "physical")
    missing = [f"physical.{k}" for k in PHYSICAL_REQUIRED if k not in section]
    if missing:
        raise ConfigError("missing physical parameters", missing)
    values = dict(section)
    for key in PHYSICAL_FREQUENCIES:
        values[key] = parse_angular_frequency(values[key])
    return PhysicalParams(**values)


def _effective(
    section: Mapping[str, Any], base: Optional[EffectiveParams]
) -> EffectiveParams:
    _unknown(section, EFFECTIVE_FIELDS + ("scale",), "effective")
    scale = section.get("scale", "abs")
    if scale not in ("abs", "mu"):
        raise ConfigError("effective.scale must be 'abs' or 'mu'", ["effective.scale"])
    if base is None:
        missing = [f"effective.{k}" for k in EFFECTIVE_REQUIRED if k not in section]
        if missing:
            raise ConfigError("missing effective parameters", missing)
        mu_ext = float(section["mu_ext"])
    else:
        mu_ext = float(section.get("mu_ext", base.mu_ext))

    values: Dict[str, Any] = {}
    for key in EFFECTIVE_FIELDS:
        if key not in section:
            continue
        value = _parse_chi(section[key]) if key == "chi" else float(section[key])
        if scale == "mu" and key in MU_SCALED:
            value = value * mu_ext
        values[key] = value
    if base is None:
        return EffectiveParams(**values)
    return base.with_updates(**values)


def _section(doc: Mapping[str, Any], key: str) -> Mapping[str, Any]:
    value = doc.get(key) or {}
    if not isinstance(value, Mapping):
        raise ConfigError(f"{key} must be a JSON object", [key])
    return value


def resolve(doc: Mapping[str, Any]) -> RunConfig:
    """Turn a config document into a ``RunConfig``.

    Raises:
        ConfigError: Missing, unknown or malformed fields, listed by name
        ParameterError: Values outside the domain of the parameter records
    """
    _unknown(doc, TOP_LEVEL, "config")
    physical = None
    base = None
    if doc.get("physical") is not None:
        physical = _physical(_section(doc, "physical"))
        mu_int = _section(doc, "effective").get("mu_int", 0.0)
        if _section(doc, "effective").get("scale") == "mu":
            mu_int = 0.0
        base = derive_effective(physical, mu_int=float(mu_int))
    if doc.get("effective") is None and base is None:
        raise ConfigError(
            "config needs a physical or an effective section", ["physical", "effective"]
        )
    effective = _effective(_section(doc, "effective"), base)

    if "mode" not in doc:
        raise ConfigError("missing drive mode", ["mode"])
    mode = DriveMode.from_config(doc["mode"])

    grid_section = _section(doc, "grid")
    _unknown(grid_section, ("points", "span", "densify"), "grid")
    grid = GridSpec(
        points=int(grid_section.get("points", DEFAULT_POINTS)),
        span=None if grid_section.get("span") is None else float(grid_section["span"]),
        densify=bool(grid_section.get("densify", False)),
    )

    sweep = None
    if doc.get("sweep") is not None:
        sweep = _sweep(_section(doc, "sweep"), doc, effective)

    fock_section = _section(doc, "fock")
    _unknown(fock_section, [f.name for f in fields(FockConfig)], "fock")
    trajectory = dict(_section(doc, "trajectory"))
    _unknown(trajectory, TRAJECTORY_FIELDS, "trajectory")

    output_section = _section(doc, "output")
    _unknown(output_section, ("path", "format"), "output")
    output = OutputSpec(
        path=output_section.get("path"), format=output_section.get("format", "csv")
    )
    if output.format not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}", ["output.format"])

    return RunConfig(
        effective=effective,
        mode=mode,
        physical=physical,
        theta=None if doc.get("theta") is None else float(doc["theta"]),
        phi=None if doc.get("phi") is None else float(doc["phi"]),
        grid=grid,
        sweep=sweep,
        fock=FockConfig(**fock_section),
        trajectory=trajectory,
        output=output,
        seed=int(doc.get("seed", 0)),
    )


def _sweep(
    section: Mapping[str, Any], doc: Mapping[str, Any], effective: EffectiveParams
) -> SweepSpec:
    _unknown(section, ("parameter", "start", "stop", "steps", "unit"), "sweep")
    required = ("parameter", "start", "stop", "steps")
    missing = [f"sweep.{k}" for k in required if k not in section]
    if missing:
        raise ConfigError("incomplete sweep", missing)
    parameter = section["parameter"]
    if parameter not in SWEEPABLE:
        raise ConfigError(
            f"sweep parameter must be one of {SWEEPABLE}", ["sweep.parameter"]
        )
    if int(section["steps"]) < 1:
        raise ConfigError("sweep.steps must be >= 1", ["sweep.steps"])
    unit = section.get("unit")
    if unit is None:
        scale = _section(doc, "effective").get("scale")
        scaled = scale == "mu" and parameter in MU_SCALED
        unit = effective.mu_ext if scaled else 1.0
    return SweepSpec(
        parameter=parameter,
        start=float(section["start"]),
        stop=float(section["stop"]),
        steps=int(section["steps"]),
        unit=float(unit),
    )


def missing_for(command: str, cfg: RunConfig) -> List[str]:
    """Config fields a subcommand needs but did not get."""
    if command == "derive" and cfg.physical is None:
        return ["physical"]
    if command == "sweep" and cfg.sweep is None:
        return ["sweep"]
    return []
