"""Command-line surface: configuration, presets, sweeps and writers."""

from .config import RunConfig, apply_overrides, load_config, resolve
from .main import build_parser, main
from .presets import PRESETS, FigurePreset, get_preset

__all__ = [
    "FigurePreset",
    "PRESETS",
    "RunConfig",
    "apply_overrides",
    "build_parser",
    "get_preset",
    "load_config",
    "main",
    "resolve",
]
