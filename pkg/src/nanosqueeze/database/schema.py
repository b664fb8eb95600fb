"""DuckDB schema for the run archive.

Every CLI invocation with ``--archive`` records one run, the files it wrote,
and the numbers behind them: spectrum points, sweep rows and oracle
comparison rows.
"""

import duckdb
from pathlib import Path
from typing import Dict, Optional, Union


SCHEMA_SQL = """
-- 1) runs: one CLI invocation
CREATE TABLE IF NOT EXISTS runs (
  run_id        INTEGER PRIMARY KEY,
  command       TEXT,
  created_at    TIMESTAMP DEFAULT current_timestamp,
  code_version  TEXT,
  config_json   JSON,
  status        TEXT
);

CREATE SEQUENCE IF NOT EXISTS runs_seq START 1;

-- 2) run_files: data files and sidecars written by a run
CREATE TABLE IF NOT EXISTS run_files (
  file_id   INTEGER PRIMARY KEY,
  run_id    INTEGER,
  path      TEXT,
  kind      TEXT,
  FOREIGN KEY (run_id) REFERENCES runs(run_id)
);

CREATE SEQUENCE IF NOT EXISTS run_files_seq START 1;

-- 3) spectrum_points: one frequency bin of one spectrum
CREATE TABLE IF NOT EXISTS spectrum_points (
  point_id            INTEGER PRIMARY KEY,
  run_id              INTEGER,
  series              TEXT,
  omega               DOUBLE,
  s_squeezed          DOUBLE,
  s_antisqueezed      DOUBLE,
  stderr_squeezed     DOUBLE,
  stderr_antisqueezed DOUBLE,
  FOREIGN KEY (run_id) REFERENCES runs(run_id)
);

CREATE SEQUENCE IF NOT EXISTS spectrum_points_seq START 1;

-- 4) sweep_rows: one grid point of a parameter sweep
CREATE TABLE IF NOT EXISTS sweep_rows (
  row_id        INTEGER PRIMARY KEY,
  run_id        INTEGER,
  row_index     INTEGER,
  parameter     TEXT,
  value         DOUBLE,
  status        TEXT,
  outputs_json  JSON,
  FOREIGN KEY (run_id) REFERENCES runs(run_id)
);

CREATE SEQUENCE IF NOT EXISTS sweep_rows_seq START 1;

-- 5) oracle_rows: one quantity computed several independent ways
CREATE TABLE IF NOT EXISTS oracle_rows (
  row_id        INTEGER PRIMARY KEY,
  run_id        INTEGER,
  quantity      TEXT,
  analytic      DOUBLE,
  moment_solver DOUBLE,
  fock_full     DOUBLE,
  fock_reduced  DOUBLE,
  trajectory    DOUBLE,
  FOREIGN KEY (run_id) REFERENCES runs(run_id)
);

CREATE SEQUENCE IF NOT EXISTS oracle_rows_seq START 1;

CREATE INDEX IF NOT EXISTS idx_runs_command ON runs(command);
CREATE INDEX IF NOT EXISTS idx_run_files_run_id ON run_files(run_id);
CREATE INDEX IF NOT EXISTS idx_spectrum_points_run_id ON spectrum_points(run_id);
CREATE INDEX IF NOT EXISTS idx_sweep_rows_run_id ON sweep_rows(run_id);
CREATE INDEX IF NOT EXISTS idx_oracle_rows_run_id ON oracle_rows(run_id);
"""

TABLES = ["runs", "run_files", "spectrum_points", "sweep_rows", "oracle_rows"]


def get_connection(
    db_path: Optional[str] = None, read_only: bool = False
) -> duckdb.DuckDBPyConnection:
    """Open the run archive given by ``--archive``.

    Args:
        db_path: Archive file; its directory is created on demand. None keeps
            the archive in memory for a single command.
        read_only: Open for inspection of finished runs only

    Returns:
        Connection to the archive
    """
    if db_path is None:
        return duckdb.connect(":memory:")

    Path(db_path).parent.mkdir(parents=True, exist_ok=True)

    return duckdb.connect(str(db_path), read_only=read_only)


def init_database(db_path: Optional[str] = None) -> duckdb.DuckDBPyConnection:
    """Open the run archive and create the run, file, spectrum, sweep and
    oracle tables that are missing."""
    conn = get_connection(db_path, read_only=False)
    conn.execute(SCHEMA_SQL)
    conn.commit()
    return conn


def verify_schema(
    conn: duckdb.DuckDBPyConnection,
) -> Dict[str, Union[int, str]]:
    """Stored runs, files, spectrum points, sweep rows and oracle rows.

    Maps each archive table to its row count, or to the error text when the
    archive predates that table.
    """
    counts: Dict[str, Union[int, str]] = {}
    for table in TABLES:
        try:
            counts[table] = conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]
        except duckdb.Error as e:
            counts[table] = f"Error: {e}"
    return counts
