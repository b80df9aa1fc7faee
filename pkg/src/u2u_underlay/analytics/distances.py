"""Serving-distance laws of UAV pairs and GUEs."""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats


def rayleigh_pdf(r: ArrayLike, sigma: float) -> float | NDArray[np.float64]:
    return stats.rayleigh.pdf(np.asarray(r, dtype=float), scale=sigma)[()]


def rayleigh_cdf(r: ArrayLike, sigma: float) -> float | NDArray[np.float64]:
    return stats.rayleigh.cdf(np.asarray(r, dtype=float), scale=sigma)[()]


def truncated_rayleigh_pdf(
    r: ArrayLike, sigma: float, r_max: float
) -> float | NDArray[np.float64]:
    """Rayleigh density renormalized to [0, r_max), zero beyond."""
    r_arr = np.asarray(r, dtype=float)
    mass = stats.rayleigh.cdf(r_max, scale=sigma)
    pdf = stats.rayleigh.pdf(r_arr, scale=sigma) / mass
    return np.where(r_arr < r_max, pdf, 0.0)[()]


def truncated_rayleigh_cdf(
    r: ArrayLike, sigma: float, r_max: float
) -> float | NDArray[np.float64]:
    r_arr = np.minimum(np.asarray(r, dtype=float), r_max)
    mass = stats.rayleigh.cdf(r_max, scale=sigma)
    return (stats.rayleigh.cdf(r_arr, scale=sigma) / mass)[()]


def sample_truncated_rayleigh(
    rng: np.random.Generator, sigma: float, r_max: float, size: int
) -> NDArray[np.float64]:
    """Inverse-CDF draws from the truncated Rayleigh law."""
    mass = stats.rayleigh.cdf(r_max, scale=sigma)
    return stats.rayleigh.ppf(rng.random(size) * mass, scale=sigma)


def sample_rayleigh(
    rng: np.random.Generator, sigma: float, size: int
) -> NDArray[np.float64]:
    return rng.rayleigh(scale=sigma, size=size)
