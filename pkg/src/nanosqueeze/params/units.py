"""Unit handling for configuration values."""

import re
from typing import Union

from ..constants import TWO_PI
from ..errors import ParameterError

_HZ_PREFIX = {"": 1.0, "k": 1e3, "M": 1e6, "G": 1e9, "T": 1e12}

_QUANTITY = re.compile(
    r"^\s*(?P<value>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)\s*"
    r"(?P<unit>rad/s|[kMGT]?Hz)?\s*$"
)


def parse_angular_frequency(value: Union[str, float, int]) -> float:
    """Convert a frequency entry to rad/s.

    Bare numbers are taken as rad/s. Strings may carry a unit suffix:
    ``rad/s``, ``Hz``, ``kHz``, ``MHz``, ``GHz`` or ``THz``; Hz values are
    multiplied by 2π.

    Args:
        value: Number or string such as ``"6 GHz"``

    Returns:
        Angular frequency in rad/s

    Example:
        >>> parse_angular_frequency("20 MHz")  # doctest: +ELLIPSIS
        125663706.1...
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ParameterError(f"cannot interpret {value!r} as a frequency")

    match = _QUANTITY.match(value)
    if match is None:
        raise ParameterError(f"cannot interpret {value!r} as a frequency")

    number = float(match.group("value"))
    unit = match.group("unit")
    if unit is None or unit == "rad/s":
        return number
    return TWO_PI * number * _HZ_PREFIX[unit[:-2]]
