"""Path loss, large-scale fading, Nakagami-m fading and power control."""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from ..scenario.params import AntennaParams, LinkClass, NodeRole, PowerControlParams
from .antenna import bs_antenna_gain
from .geometry import LinkGeometry, zenith_angle_at_bs


def path_loss(geometry: LinkGeometry, cls: LinkClass) -> float | NDArray[np.float64]:
    """Linear attenuation τ = τ̂·d^α.

    Raises:
        ValueError: If the nodes are co-located (d_3d = 0)
    """
    d = np.asarray(geometry.d_3d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("path loss undefined for co-located nodes (d_3d = 0)")
    return (cls.tau_hat * d**cls.alpha)[()]


def link_gain(
    geometry: LinkGeometry, cls: LinkClass, antenna: AntennaParams
) -> float | NDArray[np.float64]:
    """Product of endpoint antenna gains: the BS pattern on BS links, else 1."""
    if cls.link_type.touches_bs:
        return bs_antenna_gain(zenith_angle_at_bs(geometry), antenna)
    return np.ones_like(np.asarray(geometry.r_2d, dtype=float))[()]


def large_scale_fading(
    geometry: LinkGeometry, cls: LinkClass, antenna: AntennaParams
) -> float | NDArray[np.float64]:
    """ζ = τ/g. A link in an antenna null has ζ = inf."""
    tau = np.asarray(path_loss(geometry, cls))
    gain = np.asarray(link_gain(geometry, cls, antenna))
    with np.errstate(divide="ignore"):
        return np.where(gain > 0, tau / np.where(gain > 0, gain, 1.0), np.inf)[()]


def transmit_power(
    zeta_serving: ArrayLike, pc: PowerControlParams, role: NodeRole
) -> float | NDArray[np.float64]:
    """Fractional power control P = min(P_max, ρ·ζ^ε) in watts.

    ``zeta_serving`` is the large-scale fading of the node's own serving
    link (U2U pair for UAVs, serving BS for GUEs).
    """
    zeta = np.asarray(zeta_serving, dtype=float)
    if np.any(zeta <= 0) or np.any(np.isnan(zeta)):
        raise ValueError("serving large-scale fading must be positive")
    with np.errstate(over="ignore"):
        target = pc.rho_w(role) * zeta ** pc.epsilon(role)
    return np.minimum(pc.p_max_w(role), target)[()]


def sample_fading(
    cls: LinkClass,
    rng: np.random.Generator,
    size: int | tuple[int, ...] | None = None,
) -> float | NDArray[np.float64]:
    """Draw unit-mean Nakagami-m power gains ψ ~ Gamma(m, 1/m)."""
    m = cls.m_fading
    return rng.gamma(shape=m, scale=1.0 / m, size=size)


def fading_cdf(omega: ArrayLike, m: int) -> float | NDArray[np.float64]:
    """F(ω) = 1 − Σ_{i<m} (mω)^i e^{−mω}/i!, the regularized gamma P(m, mω)."""
    w = np.asarray(omega, dtype=float)
    return special.gammainc(m, m * np.maximum(w, 0.0))[()]
