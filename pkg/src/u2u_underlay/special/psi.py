"""Annulus interference kernel Ψ(s, r) under Nakagami-m fading.

For an interferer of power P at horizontal offset between r_lo and r_hi and
vertical offset h,

    Ψ(s, r_hi) − Ψ(s, r_lo) = E_ψ ∫_{r_lo}^{r_hi} (1 − e^{−sPψ d^{−α}}) r dr,

with d² = r² + h². Ψ(s, ∞) = 0, so every Ψ value is minus the tail integral
from r outward. Only the product sP (the *load*) matters.

With μ = sP·d^{−α}, the averaged integrand is 1 − (m/(m+μ))^m. Where μ ≥ m
it is close to one. There Ψ(d) = Ψ(0) + d²/2 − Q(d), with the small
complement

    Q(d) = ∫_0^d (m/(m+μ(x)))^m x dx
         = d²/2 · β/(m+β) · W^m · ₂F₁(m, m+β; m+β+1; −W),   W = m/μ(d) ≤ 1.

Where μ < m the closed form in μ is used directly. ``psi_difference`` splits
every annulus at μ = m, so a cell of a heavily loaded grid is its area minus
a difference of small complements instead of a difference of two large Ψ
values.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from .gamma import lower_incomplete_gamma
from .hypergeometric import gauss_2f1_neg


@dataclass(frozen=True)
class PsiArgs:
    """Arguments of one Ψ evaluation."""

    s: float
    r: float
    h: float
    m: int
    beta: float
    power: float

    def __post_init__(self) -> None:
        if self.s < 0 or self.r < 0 or self.power < 0:
            raise ValueError("s, r and power must be non-negative")
        if self.m < 1:
            raise ValueError(f"fading parameter m must be >= 1, got {self.m}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta = 2/alpha must lie in (0, 1), got {self.beta}")

    @property
    def load(self) -> float:
        return self.s * self.power

    @property
    def alpha(self) -> float:
        return 2.0 / self.beta


def _check_alpha(alpha: float) -> float:
    if not alpha > 2.0:
        raise ValueError(f"interference kernel needs alpha > 2, got {alpha}")
    return 2.0 / alpha


def psi_at_origin(load: ArrayLike, alpha: float, m: int) -> float | NDArray[np.float64]:
    """Limit of Ψ as r² + h² → 0 (co-planar interferers starting at the victim)."""
    beta = _check_alpha(alpha)
    load_arr = np.asarray(load, dtype=float)
    const = (
        m ** (1.0 - beta)
        * special.gamma(2.0 - beta)
        * special.gamma(m + beta)
        / (2.0 * (1.0 - beta) * special.gamma(m + 1.0))
    )
    return (-const * load_arr**beta)[()]


def _psi_light(
    u: NDArray[np.float64], d2: NDArray[np.float64], alpha: float, beta: float, m: int
) -> NDArray[np.float64]:
    """Closed form of Ψ in μ, well conditioned for μ ≤ m and finite d² > 0."""
    mu = u / d2 ** (alpha / 2.0)
    k_coef = u / (2.0 * (1.0 - beta) * d2 ** (alpha / 2.0 - 1.0))
    # 1 − (m/(m+μ))^m without overflow or cancellation
    saturation = -np.expm1(-m * np.log1p(mu / m))
    hyper = np.asarray(gauss_2f1_neg(1.0 + m, 1.0 - beta, 2.0 - beta, -mu / m))
    return d2 / 2.0 * saturation - k_coef * hyper


def _saturated_complement(
    u: NDArray[np.float64], d2: NDArray[np.float64], alpha: float, beta: float, m: int
) -> NDArray[np.float64]:
    """Q(d) for d² = d2 with μ(d) ≥ m (d = 0 allowed)."""
    w = m * d2 ** (alpha / 2.0) / u
    hyper = np.asarray(gauss_2f1_neg(float(m), m + beta, m + beta + 1.0, -w))
    return 0.5 * d2 * beta / (m + beta) * w**m * hyper


def _split_d2(u: NDArray[np.float64], beta: float, m: int) -> NDArray[np.float64]:
    """d² at which μ = m."""
    return (u / m) ** beta


def psi(
    load: ArrayLike, r: ArrayLike, h: float, alpha: float, m: int
) -> float | NDArray[np.float64]:
    """Vectorized Ψ for broadcastable ``load`` (= sP) and ``r`` arrays."""
    beta = _check_alpha(alpha)
    load_arr, r_arr = np.broadcast_arrays(
        np.asarray(load, dtype=float), np.asarray(r, dtype=float)
    )
    out = np.zeros(load_arr.shape)
    d_sq = r_arr**2 + h**2

    regular = np.isfinite(d_sq) & (load_arr > 0)
    if np.any(regular):
        d2 = d_sq[regular]
        u = load_arr[regular]
        heavy = d2 <= _split_d2(u, beta, m)
        values = np.empty(u.shape)
        if np.any(heavy):
            u_h, d2_h = u[heavy], d2[heavy]
            values[heavy] = (
                np.asarray(psi_at_origin(u_h, alpha, m))
                + d2_h / 2.0
                - _saturated_complement(u_h, d2_h, alpha, beta, m)
            )
        if not np.all(heavy):
            light = ~heavy
            values[light] = _psi_light(u[light], d2[light], alpha, beta, m)
        out[regular] = values
    return out[()]


def psi_difference(
    load: ArrayLike, r_lo: ArrayLike, r_hi: ArrayLike, h: float, alpha: float, m: int
) -> float | NDArray[np.float64]:
    """Ψ(s, r_hi) − Ψ(s, r_lo) for broadcastable arrays, never negative.

    The annulus is cut where μ = m. The inner, saturated part is its area
    minus the growth of Q; the outer part is a difference of closed-form Ψ
    values whose magnitudes are of the order of the part itself. Empty or
    reversed annuli and zero loads give 0; r_hi may be infinite.
    """
    beta = _check_alpha(alpha)
    load_arr, lo_arr, hi_arr = np.broadcast_arrays(
        np.asarray(load, dtype=float),
        np.asarray(r_lo, dtype=float),
        np.asarray(r_hi, dtype=float),
    )
    out = np.zeros(load_arr.shape)
    active = (load_arr > 0) & (hi_arr > lo_arr)
    if not np.any(active):
        return out[()]

    u = load_arr[active]
    d2_lo = lo_arr[active] ** 2 + h**2
    d2_hi = hi_arr[active] ** 2 + h**2
    d2_split = np.clip(_split_d2(u, beta, m), d2_lo, d2_hi)
    value = np.zeros(u.shape)

    saturated = d2_split > d2_lo
    if np.any(saturated):
        u_s, lo_s, split_s = u[saturated], d2_lo[saturated], d2_split[saturated]
        value[saturated] = 0.5 * (split_s - lo_s) - (
            _saturated_complement(u_s, split_s, alpha, beta, m)
            - _saturated_complement(u_s, lo_s, alpha, beta, m)
        )

    light = d2_hi > d2_split
    if np.any(light):
        u_l, split_l, hi_l = u[light], d2_split[light], d2_hi[light]
        upper = np.zeros(u_l.shape)
        finite = np.isfinite(hi_l)
        if np.any(finite):
            upper[finite] = _psi_light(u_l[finite], hi_l[finite], alpha, beta, m)
        value[light] += upper - _psi_light(u_l, split_l, alpha, beta, m)

    # the integrand is non-negative; only rounding can push a cell below 0
    out[active] = np.maximum(value, 0.0)
    return out[()]


def psi_kernel(args: PsiArgs) -> float:
    """Evaluate Ψ(s, r) for one set of arguments."""
    return float(psi(args.load, args.r, args.h, args.alpha, args.m))


def annulus_interference(
    load: ArrayLike, r_lo: float, r_hi: float, h: float, alpha: float
) -> float | NDArray[np.float64]:
    """∫_{r_lo}^{r_hi} (1 − e^{−load·d^{−α}}) r dr for a fixed fading gain.

    Closed form through the lower incomplete gamma function. By Jensen's
    inequality it also bounds the fading-averaged annulus integral of any
    unit-mean fading from above.
    """
    beta = _check_alpha(alpha)
    load_arr = np.asarray(load, dtype=float)

    def tail(r: float) -> NDArray[np.float64]:
        if math.isinf(r):
            return np.zeros_like(load_arr)
        d_sq = r * r + h * h
        if d_sq == 0:
            return 0.5 * load_arr**beta * special.gamma(1.0 - beta)
        v = load_arr / d_sq ** (alpha / 2.0)
        safe_v = np.where(v > 0, v, 1.0)
        body = np.asarray(lower_incomplete_gamma(1.0 - beta, safe_v)) + np.expm1(
            -safe_v
        ) * safe_v ** (-beta)
        return np.where(v > 0, 0.5 * load_arr**beta * body, 0.0)

    return (tail(r_lo) - tail(r_hi))[()]
