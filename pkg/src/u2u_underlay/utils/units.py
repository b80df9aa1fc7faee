"""Power, gain and density unit conversions.

All physics code works in linear watts and meters; dB forms exist only at the
configuration and reporting edges.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

FloatOrArray = float | NDArray[np.float64]


def db_to_linear(value_db: ArrayLike) -> FloatOrArray:
    """Convert a ratio in dB to linear scale."""
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)[()]


def linear_to_db(value: ArrayLike) -> FloatOrArray:
    """Convert a linear ratio to dB. Zero maps to -inf."""
    with np.errstate(divide="ignore"):
        return (10.0 * np.log10(np.asarray(value, dtype=float)))[()]


def dbm_to_watts(power_dbm: ArrayLike) -> FloatOrArray:
    """Convert a power level in dBm to watts."""
    return np.power(10.0, (np.asarray(power_dbm, dtype=float) - 30.0) / 10.0)[()]


def watts_to_dbm(power_w: ArrayLike) -> FloatOrArray:
    """Convert a power level in watts to dBm. Zero maps to -inf."""
    with np.errstate(divide="ignore"):
        return (10.0 * np.log10(np.asarray(power_w, dtype=float)) + 30.0)[()]


def per_km2_to_per_m2(density_per_km2: float) -> float:
    return density_per_km2 / 1e6


def per_m2_to_per_km2(density_per_m2: float) -> float:
    return density_per_m2 * 1e6
