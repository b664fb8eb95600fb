"""Writing and reading archived runs."""

import json
import logging
import math
from datetime import datetime
from typing import Any, Dict, Iterable, List, Mapping, Optional

import duckdb

logger = logging.getLogger(__name__)

ORACLE_COLUMNS = [
    "analytic",
    "moment_solver",
    "fock_full",
    "fock_reduced",
    "trajectory",
]


def _number(value: Any) -> Optional[float]:
    """None for missing or non-finite values; DuckDB stores them as NULL."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def save_run(
    conn: duckdb.DuckDBPyConnection,
    command: str,
    code_version: str,
    config: Mapping[str, Any],
) -> int:
    """Register a run in state ``running``.

    Args:
        conn: DuckDB connection
        command: CLI subcommand name
        code_version: Package version that produced the run
        config: Fully resolved configuration

    Returns:
        The run_id of the created record
    """
    result = conn.execute(
        """
        INSERT INTO runs (
            run_id, command, created_at, code_version, config_json, status
        )
        VALUES (
            nextval('runs_seq'), ?, ?, ?, ?, 'running'
        )
        RETURNING run_id
    """,
        [command, datetime.now(), code_version, json.dumps(config)],
    ).fetchone()

    conn.commit()
    logger.debug("archived run %d (%s)", result[0], command)
    return result[0]


def save_file(
    conn: duckdb.DuckDBPyConnection, run_id: int, path: str, kind: str
) -> int:
    result = conn.execute(
        """
        INSERT INTO run_files (file_id, run_id, path, kind)
        VALUES (nextval('run_files_seq'), ?, ?, ?)
        RETURNING file_id
    """,
        [run_id, path, kind],
    ).fetchone()
    conn.commit()
    return result[0]


def save_spectrum(
    conn: duckdb.DuckDBPyConnection,
    run_id: int,
    series: str,
    columns: Mapping[str, Iterable[float]],
) -> int:
    """Store one spectrum, bin by bin.

    Args:
        conn: DuckDB connection
        run_id: Owning run
        series: Label distinguishing spectra of the same run
        columns: ``SpectrumResult.columns()``; error columns are optional

    Returns:
        Number of stored points
    """
    omega = list(columns["omega_rad_s"])
    missing = [None] * len(omega)
    rows = [
        [run_id, series, _number(w), _number(s), _number(a), _number(es), _number(ea)]
        for w, s, a, es, ea in zip(
            omega,
            columns["S_squeezed"],
            columns["S_antisqueezed"],
            columns.get("stderr_squeezed", missing),
            columns.get("stderr_antisqueezed", missing),
        )
    ]
    conn.executemany(
        """
        INSERT INTO spectrum_points (
            point_id, run_id, series, omega, s_squeezed, s_antisqueezed,
            stderr_squeezed, stderr_antisqueezed
        )
        VALUES (nextval('spectrum_points_seq'), ?, ?, ?, ?, ?, ?, ?)
    """,
        rows,
    )
    conn.commit()
    return len(rows)


def save_sweep_rows(
    conn: duckdb.DuckDBPyConnection,
    run_id: int,
    parameter: str,
    rows: List[Dict[str, Any]],
) -> int:
    """Store sweep rows; each needs ``row_index``, ``value`` and ``status``.

    Remaining keys are kept as JSON.
    """
    records = []
    for row in rows:
        outputs = {
            k: v for k, v in row.items() if k not in ("row_index", "value", "status")
        }
        records.append(
            [
                run_id,
                int(row["row_index"]),
                parameter,
                _number(row["value"]),
                row["status"],
                json.dumps(outputs, default=str),
            ]
        )
    conn.executemany(
        """
        INSERT INTO sweep_rows (
            row_id, run_id, row_index, parameter, value, status, outputs_json
        )
        VALUES (nextval('sweep_rows_seq'), ?, ?, ?, ?, ?, ?)
    """,
        records,
    )
    conn.commit()
    return len(records)


def save_oracle_rows(
    conn: duckdb.DuckDBPyConnection, run_id: int, rows: List[Dict[str, Any]]
) -> int:
    """Store oracle comparison rows keyed by ``quantity``; absent methods are NULL."""
    records = [
        [run_id, row["quantity"]] + [_number(row.get(c)) for c in ORACLE_COLUMNS]
        for row in rows
    ]
    conn.executemany(
        """
        INSERT INTO oracle_rows (
            row_id, run_id, quantity, analytic, moment_solver,
            fock_full, fock_reduced, trajectory
        )
        VALUES (nextval('oracle_rows_seq'), ?, ?, ?, ?, ?, ?, ?)
    """,
        records,
    )
    conn.commit()
    return len(records)


def finish_run(conn: duckdb.DuckDBPyConnection, run_id: int, status: str) -> None:
    conn.execute("UPDATE runs SET status = ? WHERE run_id = ?", [status, run_id])
    conn.commit()


def load_run(conn: duckdb.DuckDBPyConnection, run_id: int) -> Dict[str, Any]:
    """Everything archived for one run.

    Returns:
        Dict with ``run`` (header fields, config decoded), ``files``,
        ``spectrum_points``, ``sweep_rows`` and ``oracle_rows``

    Raises:
        KeyError: No such run
    """
    header = conn.execute(
        """
        SELECT run_id, command, created_at, code_version, config_json, status
        FROM runs WHERE run_id = ?
    """,
        [run_id],
    ).fetchone()
    if header is None:
        raise KeyError(f"no archived run with id {run_id}")

    def fetch(query: str) -> List[Dict[str, Any]]:
        cursor = conn.execute(query, [run_id])
        names = [d[0] for d in cursor.description]
        return [dict(zip(names, row)) for row in cursor.fetchall()]

    sweep = fetch(
        "SELECT row_index, parameter, value, status, outputs_json "
        "FROM sweep_rows WHERE run_id = ? ORDER BY row_index"
    )
    for row in sweep:
        row["outputs"] = json.loads(row.pop("outputs_json"))

    return {
        "run": {
            "run_id": header[0],
            "command": header[1],
            "created_at": header[2],
            "code_version": header[3],
            "config": json.loads(header[4]),
            "status": header[5],
        },
        "files": fetch(
            "SELECT path, kind FROM run_files WHERE run_id = ? ORDER BY file_id"
        ),
        "spectrum_points": fetch(
            "SELECT series, omega, s_squeezed, s_antisqueezed, stderr_squeezed, "
            "stderr_antisqueezed FROM spectrum_points WHERE run_id = ? "
            "ORDER BY point_id"
        ),
        "sweep_rows": sweep,
        "oracle_rows": fetch(
            "SELECT quantity, " + ", ".join(ORACLE_COLUMNS) + " FROM oracle_rows "
            "WHERE run_id = ? ORDER BY row_id"
        ),
    }
