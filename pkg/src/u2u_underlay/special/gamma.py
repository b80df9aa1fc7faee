"""Lower incomplete gamma function on the interval the kernels need."""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special


def lower_incomplete_gamma(a: float, x: ArrayLike) -> float | NDArray[np.float64]:
    """γ(a, x) = ∫₀ˣ t^{a−1} e^{−t} dt for 0 < a < 1 and x ≥ 0 (x = inf allowed).

    Raises:
        ValueError: If a is outside (0, 1) or any x is negative
    """
    if not 0.0 < a < 1.0:
        raise ValueError(f"lower_incomplete_gamma requires 0 < a < 1, got a = {a}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or np.any(np.isnan(x_arr)):
        raise ValueError("lower_incomplete_gamma requires x >= 0")
    return (special.gammainc(a, x_arr) * special.gamma(a))[()]
