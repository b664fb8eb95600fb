"""Figure presets: squeezing-spectrum maps over one swept parameter.

Values are the published caption parameters, rates in units of μ. Bump
``PRESET_VERSION`` whenever a stored value changes.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from ..errors import ConfigError

PRESET_VERSION = 1

MU = 3.77e5
GAMMA = 1.26e3
GAMMA_RATIO_FIG4 = 0.003334

MAP_SPAN = 0.5
MAP_POINTS = 401
SWEEP_STEPS = 101


@dataclass(frozen=True)
class FigurePreset:
    """One figure: drive, the swept rate and the fixed rates.

    Attributes:
        name: Preset key
        mode: Drive mode as a config value
        parameter: Swept effective rate (``g`` or ``chi``)
        start: First value in units of μ
        stop: Last value in units of μ
        fixed: Fixed rates in units of μ (``g`` or ``chi``)
        gamma: Mechanical damping in units of μ
        n_m0_values: One output file per bath occupation
        caption: Short description of the panel
    """

    name: str
    mode: Any
    parameter: str
    start: float
    stop: float
    fixed: Dict[str, float]
    gamma: float = GAMMA / MU
    n_m0_values: Tuple[float, ...] = (0.0,)
    caption: str = ""

    def documents(self, steps: int = SWEEP_STEPS) -> List[Tuple[Optional[float], Dict]]:
        """Config documents, one per bath occupation."""
        out = []
        for n_m0 in self.n_m0_values:
            effective = {"mu_ext": MU, "gamma": self.gamma, "n_m0": n_m0, "scale": "mu"}
            effective.update(self.fixed)
            effective.setdefault(self.parameter, self.start)
            doc = {
                "effective": effective,
                "mode": self.mode,
                "grid": {"points": MAP_POINTS, "span": MAP_SPAN * MU},
                "sweep": {
                    "parameter": self.parameter,
                    "start": self.start,
                    "stop": self.stop,
                    "steps": steps,
                },
            }
            label = n_m0 if len(self.n_m0_values) > 1 else None
            out.append((label, doc))
        return out


PRESETS: Dict[str, FigurePreset] = {
    p.name: p
    for p in [
        FigurePreset(
            "fig2a", "blue", "chi", 0.0, 5e-5, {"g": 0.028},
            caption="blue sideband, chi/mu sweep at g/mu = 0.028",
        ),
        FigurePreset(
            "fig2b", "blue", "g", 0.0, 0.028, {"chi": 4.8e-5},
            caption="blue sideband, g/mu sweep at chi/mu = 4.8e-5",
        ),
        FigurePreset(
            "fig2c", "red", "chi", 0.0, 0.009, {"g": 0.09},
            caption="red sideband, chi/mu sweep at g/mu = 0.09",
        ),
        FigurePreset(
            "fig2d", "red", "g", 0.05, 0.3, {"chi": 0.003},
            caption="red sideband, g/mu sweep at chi/mu = 0.003",
        ),
        FigurePreset(
            "fig2e", "blue_red", "chi", 0.0, 0.00083, {"g": 0.09},
            caption="both sidebands, chi/mu sweep at g/mu = 0.09",
        ),
        FigurePreset(
            "fig2f", "blue_red", "g", 0.01, 0.3, {"chi": 8.0e-4},
            caption="both sidebands, g/mu sweep at chi/mu = 8e-4",
        ),
        FigurePreset(
            "fig3", "red", "g", 0.32, 2.0, {"chi": 0.1},
            caption="red sideband, normal-mode splitting map at chi/mu = 0.1",
        ),
        FigurePreset(
            "fig4", "red", "chi", 0.0, 0.009, {"g": 0.09},
            gamma=GAMMA_RATIO_FIG4,
            n_m0_values=(0.0, 0.25, 0.5, 1.0, 2.0, 4.0),
            caption="red sideband, chi/mu sweep at g/mu = 0.09, six bath occupations",
        ),
    ]
}


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown figure preset {name!r}", [name])
