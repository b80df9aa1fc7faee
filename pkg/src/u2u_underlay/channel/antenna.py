"""BS antenna pattern: element directivity times the vertical ULA array factor."""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..scenario.params import AntennaParams

_ANGLE_TOLERANCE = 1e-12
_SINGULAR = 1e-12


def element_gain(
    zenith_angle: ArrayLike, antenna: AntennaParams
) -> float | NDArray[np.float64]:
    """Element directivity g_E(θ) = g_E^max·sin²θ."""
    theta = np.asarray(zenith_angle, dtype=float)
    return (antenna.element_peak_gain * np.sin(theta) ** 2)[()]


def array_factor(
    zenith_angle: ArrayLike, antenna: AntennaParams
) -> float | NDArray[np.float64]:
    """Normalized ULA factor; equals N on the electrical tilt."""
    theta = np.asarray(zenith_angle, dtype=float)
    n = antenna.n_elements
    x = np.pi * (np.cos(theta) - np.cos(antenna.downtilt_rad)) / 2.0
    denom = n * np.sin(x) ** 2
    singular = np.abs(denom) < _SINGULAR
    safe = np.where(singular, 1.0, denom)
    return np.where(singular, float(n), np.sin(n * x) ** 2 / safe)[()]


def bs_antenna_gain(
    zenith_angle: ArrayLike, antenna: AntennaParams
) -> float | NDArray[np.float64]:
    """Total BS gain g_b(θ) = g_E(θ)·g_A(θ), linear.

    Raises:
        ValueError: If any angle lies outside [0, π]
    """
    theta = np.asarray(zenith_angle, dtype=float)
    if np.any(theta < -_ANGLE_TOLERANCE) or np.any(theta > np.pi + _ANGLE_TOLERANCE):
        raise ValueError("zenith angle must lie in [0, π]")
    return (
        np.asarray(element_gain(theta, antenna)) * np.asarray(array_factor(theta, antenna))
    )[()]
