"""Gauss hypergeometric ₂F₁ for real parameters and non-positive argument.

The Pfaff transformation maps z ≤ 0 to w = z/(z−1) ∈ [0, 1), where the
forward series converges. Close to w = 1 the series slows down, so there the
result is continued from 1 − w with the standard connection formula, which
needs a − b to be non-integer (always the case for the Ψ family, where
a − b = m + β).
"""

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from ..errors import NumericalError

logger = logging.getLogger(__name__)

SERIES_RTOL = 1e-12
MAX_TERMS = 10_000
CONNECTION_THRESHOLD = 0.9
_INTEGER_GAP = 1e-6


def _forward_series(
    a: float, b: float, c: float, x: NDArray[np.float64]
) -> tuple[NDArray[np.float64], int]:
    """Sum Σ (a)_n (b)_n / ((c)_n n!) xⁿ for 0 ≤ x < 1, elementwise."""
    total = np.ones_like(x)
    term = np.ones_like(x)
    active = np.flatnonzero(x != 0.0)
    # Terms only shrink monotonically once n is past the parameters
    warmup = int(max(abs(a), abs(b), abs(c))) + 1
    n = 0
    while active.size and n < MAX_TERMS:
        xa = x[active]
        term[active] *= (a + n) * (b + n) / ((c + n) * (n + 1)) * xa
        total[active] += term[active]
        n += 1
        if n >= warmup:
            small = np.abs(term[active]) <= SERIES_RTOL * (1.0 - xa) * np.abs(total[active])
            active = active[~small]
    if active.size:
        raise NumericalError(
            f"2F1 series did not converge within {MAX_TERMS} terms",
            terms_used=n,
            unconverged=int(active.size),
            worst_argument=float(x[active].max()),
        )
    return total, n


def gauss_2f1_neg(
    a: float,
    b: float,
    c: float,
    z: ArrayLike,
    *,
    full_output: bool = False,
) -> float | NDArray[np.float64] | tuple[float | NDArray[np.float64], dict[str, int]]:
    """Evaluate ₂F₁(a, b; c; z) for z ≤ 0 and c > b.

    Args:
        a, b, c: Real parameters
        z: Non-positive argument(s)
        full_output: Also return a dict with the number of series terms used
            and how many points took the connection branch

    Raises:
        ValueError: If any z > 0 or c <= b
        NumericalError: If a series fails to converge
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr > 0) or np.any(np.isnan(z_arr)):
        raise ValueError("gauss_2f1_neg requires z <= 0")
    if not c > b:
        raise ValueError(f"gauss_2f1_neg requires c > b, got b = {b}, c = {c}")

    flat = z_arr.reshape(-1)
    one_minus_z = 1.0 - flat
    w = -flat / one_minus_z
    w_complement = 1.0 / one_minus_z
    prefactor = one_minus_z ** (-b)

    a_minus_b = a - b
    connection_ok = abs(a_minus_b - round(a_minus_b)) > _INTEGER_GAP
    near_one = (w > CONNECTION_THRESHOLD) if connection_ok else np.zeros_like(w, dtype=bool)

    result = np.empty_like(flat)
    terms = 0

    direct = ~near_one
    if np.any(direct):
        values, n = _forward_series(c - a, b, c, w[direct])
        result[direct] = prefactor[direct] * values
        terms = max(terms, n)

    if np.any(near_one):
        x = w_complement[near_one]
        first, n1 = _forward_series(c - a, b, b - a + 1.0, x)
        second, n2 = _forward_series(a, c - b, a - b + 1.0, x)
        coef_first = special.gamma(c) * special.gamma(a - b) * special.rgamma(a) * special.rgamma(c - b)
        coef_second = special.gamma(c) * special.gamma(b - a) * special.rgamma(c - a) * special.rgamma(b)
        continued = coef_first * first + x ** (a - b) * coef_second * second
        result[near_one] = prefactor[near_one] * continued
        terms = max(terms, n1, n2)

    value = result.reshape(z_arr.shape)[()]
    if full_output:
        return value, {"terms": terms, "connection_points": int(near_one.sum())}
    return value
