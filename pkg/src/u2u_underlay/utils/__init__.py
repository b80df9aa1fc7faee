"""Utility functions for logging setup and unit handling."""

from .logging_config import setup_logging
from .units import (
    db_to_linear,
    dbm_to_watts,
    linear_to_db,
    per_km2_to_per_m2,
    per_m2_to_per_km2,
    watts_to_dbm,
)

__all__ = [
    "db_to_linear",
    "dbm_to_watts",
    "linear_to_db",
    "per_km2_to_per_m2",
    "per_m2_to_per_km2",
    "setup_logging",
    "watts_to_dbm",
]
