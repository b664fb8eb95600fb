"""Data files, sidecars and stdout reports."""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    if value is None:
        return ""
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def write_sidecar(prefix: str, meta: Mapping[str, Any]) -> str:
    path = f"{prefix}.meta.json"
    Path(path).write_text(
        json.dumps(_jsonable(meta), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def write_columns(
    prefix: str,
    columns: Mapping[str, Sequence[Any]],
    meta: Mapping[str, Any],
    fmt: str = "csv",
) -> List[str]:
    """Write equal-length columns plus the ``.meta.json`` sidecar.

    Floats are written with 17 significant digits so that a rerun from the
    sidecar is byte-identical.

    Args:
        prefix: Output path without extension; parent directories are created
        columns: Column name to values, in output order
        meta: Resolved configuration and provenance for the sidecar
        fmt: ``"csv"`` or ``"json"``

    Returns:
        Paths of the data file and the sidecar
    """
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    lengths = {len(columns[n]) for n in names}
    if len(lengths) > 1:
        raise ValueError(f"columns differ in length: {sorted(lengths)}")

    if fmt == "json":
        path = f"{prefix}.json"
        body = {n: _jsonable(list(columns[n])) for n in names}
        Path(path).write_text(json.dumps(body, indent=1) + "\n", encoding="utf-8")
    else:
        path = f"{prefix}.csv"
        numeric = all(
            np.asarray(columns[n]).dtype.kind in "fi" for n in names
        )
        if numeric:
            data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
            np.savetxt(
                path,
                data,
                fmt=FLOAT_FORMAT,
                delimiter=",",
                header=",".join(names),
                comments="",
            )
        else:
            rows = zip(*(columns[n] for n in names))
            lines = [",".join(names)]
            lines.extend(",".join(_cell(v) for v in row) for row in rows)
            Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return [path, write_sidecar(prefix, meta)]


def rows_to_columns(rows: Sequence[Mapping[str, Any]]) -> Dict[str, List[Any]]:
    """Column view of row dicts; keys missing from a row become None."""
    names: List[str] = []
    for row in rows:
        names.extend(k for k in row if k not in names)
    return {n: [row.get(n) for row in rows] for n in names}


def report(data: Mapping[str, Any], machine: bool = False) -> str:
    """Render a result for stdout: JSON, or indented ``key: value`` lines."""
    if machine:
        return json.dumps(_jsonable(data), indent=2, sort_keys=True)
    lines: List[str] = []

    def walk(value: Any, indent: int) -> None:
        pad = "  " * indent
        for key, item in value.items():
            if isinstance(item, Mapping):
                lines.append(f"{pad}{key}:")
                walk(item, indent + 1)
            elif (
                isinstance(item, (list, tuple))
                and item
                and isinstance(item[0], Mapping)
            ):
                lines.append(f"{pad}{key}:")
                for entry in item:
                    lines.append(f"{pad}  -")
                    walk(entry, indent + 2)
            elif isinstance(item, (float, np.floating)):
                lines.append(f"{pad}{key}: {item:.6g}")
            else:
                lines.append(f"{pad}{key}: {_jsonable(item)}")

    walk(data, 0)
    return "\n".join(lines)
