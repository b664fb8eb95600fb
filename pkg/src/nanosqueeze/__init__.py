"""nanosqueeze - squeezing of a parametrically driven nanoresonator read out
through a microwave cavity."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    GridSpanError,
    InstabilityError,
    InsufficientDataError,
    NanosqueezeError,
    ParameterError,
    SingularSystemError,
    TruncationError,
)
from .model import DriveMode, build_drift, stability  # noqa: E402
from .params import EffectiveParams, PhysicalParams, derive_effective  # noqa: E402

__all__ = [
    "__version__",
    "ConfigError",
    "DriveMode",
    "EffectiveParams",
    "GridSpanError",
    "InstabilityError",
    "InsufficientDataError",
    "NanosqueezeError",
    "ParameterError",
    "PhysicalParams",
    "SingularSystemError",
    "TruncationError",
    "build_drift",
    "derive_effective",
    "stability",
]
