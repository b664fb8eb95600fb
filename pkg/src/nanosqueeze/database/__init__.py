"""Database module for the DuckDB run archive."""

from .schema import init_database, get_connection, verify_schema
from .store import (
    finish_run,
    load_run,
    save_file,
    save_oracle_rows,
    save_run,
    save_spectrum,
    save_sweep_rows,
)

__all__ = [
    "init_database",
    "get_connection",
    "verify_schema",
    "finish_run",
    "load_run",
    "save_file",
    "save_oracle_rows",
    "save_run",
    "save_spectrum",
    "save_sweep_rows",
]
