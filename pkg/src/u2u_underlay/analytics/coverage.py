"""Coverage probability of the U2U link and of the GUE uplink.

The serving link of the typical victim has horizontal length r with
density f(r) and condition ν with probability p^ν(r). With Nakagami-m
fading of mean one, coverage at threshold T is

    Σ_ν ∫ f^ν(r) Σ_{i<m} (−1)^i q_i(s) D^i[L](s) dr,   s = m·T·ζ^ν(r)/P^ν(r),

where q_i(s) = e^{−N₀s} s^i/i! Σ_{k=i}^{m−1} (sN₀)^{k−i}/(k−i)!. For m = 1
only q_0 = e^{−N₀s} remains and no derivatives are needed.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad_vec

from ..channel.los import los_step_table
from ..errors import NumericalError
from ..scenario.params import Condition, NodeRole, ScenarioParams, Victim, noise_power_w
from ..storage.models import ANALYTIC, CoverageCurve
from ..utils.units import db_to_linear
from .laplacian import InterferenceField, laplacian_derivatives
from .quadrature import interior_breakpoints
from .sources import (
    serving_link_type,
    serving_pdf,
    serving_power,
    serving_support,
    serving_zeta,
    source_power_model,
)

logger = logging.getLogger(__name__)

ANALYTIC_CURVE_COLUMNS = [
    "threshold_db",
    "coverage",
    "coverage_los_branch",
    "coverage_nlos_branch",
    "quad_err",
]
_RANGE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CoverageResult:
    """Analytic coverage curve with its per-ν serving-condition branches.

    The two branches sum to the total. On construction the curve is checked
    to lie in [0, 1] and to be non-increasing in T up to the quadrature
    error; residual violations inside that tolerance are clipped.
    """

    victim: Victim
    threshold_db: NDArray[np.float64]
    coverage: NDArray[np.float64]
    coverage_los_branch: NDArray[np.float64]
    coverage_nlos_branch: NDArray[np.float64]
    quad_err: NDArray[np.float64]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.threshold_db.size
        for name in ("coverage", "coverage_los_branch", "coverage_nlos_branch", "quad_err"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have one value per threshold")

        tol = _RANGE_TOLERANCE + 10.0 * float(np.max(self.quad_err, initial=0.0))
        cov = self.coverage
        if np.any(cov < -tol) or np.any(cov > 1.0 + tol) or not np.all(np.isfinite(cov)):
            raise NumericalError(
                f"{self.victim} coverage left [0, 1]: min {cov.min():.3e}, max {cov.max():.6f}",
                coverage=cov,
            )
        rises = np.diff(cov)
        if np.any(rises > tol):
            worst = int(np.argmax(rises))
            raise NumericalError(
                f"{self.victim} coverage increases by {rises[worst]:.2e} between "
                f"{self.threshold_db[worst]} and {self.threshold_db[worst + 1]} dB",
                coverage=cov,
            )
        object.__setattr__(self, "coverage", np.minimum.accumulate(np.clip(cov, 0.0, 1.0)))

    @property
    def label(self) -> str:
        return "u2u" if self.victim is Victim.UAV else "gue"

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "threshold_db": self.threshold_db,
                "coverage": self.coverage,
                "coverage_los_branch": self.coverage_los_branch,
                "coverage_nlos_branch": self.coverage_nlos_branch,
                "quad_err": self.quad_err,
            },
            columns=ANALYTIC_CURVE_COLUMNS,
        )

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    def to_curve(self, label: str | None = None) -> CoverageCurve:
        return CoverageCurve(
            label=label or self.label,
            engine=ANALYTIC,
            threshold_db=self.threshold_db,
            coverage=self.coverage,
        )


def _conditional_coverage(
    s: NDArray[np.float64],
    m: int,
    noise: float,
    field: InterferenceField | None,
    stats: dict[str, Any],
) -> NDArray[np.float64]:
    """Σ_i (−1)^i q_i(s) D^i[L](s) for the given serving s values."""
    noise_factor = np.exp(-noise * s)
    out = np.zeros_like(s)
    live = noise_factor > 0
    if not np.any(live):
        return out
    s_live = s[live]

    if m == 1:
        lap = 1.0 if field is None else field.laplacian(s_live)
        out[live] = noise_factor[live] * lap
        return out

    if field is None:
        derivs = np.zeros((m, s_live.size))
        derivs[0] = 1.0
    else:
        estimate = laplacian_derivatives(field.exponent, s_live, m - 1)
        derivs = estimate.values
        worst = float(estimate.errors.max())
        stats["derivative_err"] = max(stats.get("derivative_err", 0.0), worst)
        stats["derivative_calls"] = stats.get("derivative_calls", 0) + 1

    total = np.zeros_like(s_live)
    sn = s_live * noise
    for i in range(m):
        inner = sum(sn ** (k - i) / math.factorial(k - i) for k in range(i, m))
        q_i = noise_factor[live] * s_live**i / math.factorial(i) * inner
        total += (-1) ** i * q_i * derivs[i]
    out[live] = total
    return out


def _coverage(
    victim: Victim,
    params: ScenarioParams,
    thresholds_db: ArrayLike | None,
    *,
    field: InterferenceField | None,
    include_noise: bool,
    include_interference: bool,
) -> CoverageResult:
    thresholds = np.asarray(
        params.sinr_threshold_db if thresholds_db is None else thresholds_db, dtype=float
    ).reshape(-1)
    if thresholds.size == 0 or np.any(np.diff(thresholds) <= 0):
        raise ValueError("threshold grid must be non-empty and strictly increasing")
    t_lin = np.asarray(db_to_linear(thresholds), dtype=float).reshape(-1)

    role = NodeRole.UAV if victim is Victim.UAV else NodeRole.GUE
    link_type = serving_link_type(role)
    clamp = not (role is NodeRole.GUE and params.analytics.unclamped_serving_power)
    noise = noise_power_w(params) if include_noise else 0.0
    if include_interference:
        field = field or InterferenceField(params, victim)
    else:
        field = None

    serving_los = los_step_table(link_type, params)
    upper = serving_support(role, params)
    classes = {nu: params.link_class(link_type, nu) for nu in Condition}
    stats: dict[str, Any] = {}

    def integrand(r: float) -> NDArray[np.float64]:
        out = np.zeros((2, t_lin.size))
        pdf = float(serving_pdf(role, r, params))
        if pdf == 0.0:
            return out
        p_los = float(serving_los(r))
        for row, nu in enumerate(Condition):
            weight = pdf * (p_los if nu is Condition.LOS else 1.0 - p_los)
            if weight == 0.0:
                continue
            zeta = float(serving_zeta(role, nu, r, params))
            if not math.isfinite(zeta):
                continue
            power = float(serving_power(role, nu, r, params, clamp=clamp))
            m = classes[nu].m_fading
            s = m * t_lin * zeta / power
            out[row] = weight * _conditional_coverage(s, m, noise, field, stats)
        return out

    res, err, info = quad_vec(
        integrand,
        0.0,
        upper,
        epsabs=params.analytics.outer_epsabs,
        epsrel=1e-8,
        norm="max",
        points=interior_breakpoints(upper, params.los_grid_spacing_m) or None,
        full_output=True,
    )
    if not info.success:
        raise NumericalError(
            f"{victim} coverage quadrature did not converge: {info.message}",
            neval=info.neval,
            error=err,
        )

    res = np.asarray(res)
    quad_err = np.full(t_lin.size, float(err))
    sources = source_power_model(role, params)
    diagnostics: dict[str, Any] = {
        "neval": int(info.neval),
        "intervals": int(len(info.intervals)),
        "serving_mean_power_w": sources.mean_power(),
        "serving_los_probability": sources.condition_probability(Condition.LOS),
        "clamp_active_mass": sources.fraction_at_max_power(),
        "serving_mass_outside": 1.0 - sources.expected_mass,
        "clamped_serving_power": clamp,
        "include_noise": include_noise,
        "include_interference": include_interference,
        **stats,
    }
    if field is not None:
        diagnostics["table_fallbacks"] = field.table_fallbacks
        diagnostics["method"] = field.method
    logger.debug(f"{victim} coverage: {diagnostics}")

    return CoverageResult(
        victim=victim,
        threshold_db=thresholds,
        coverage=res[0] + res[1],
        coverage_los_branch=res[0],
        coverage_nlos_branch=res[1],
        quad_err=quad_err,
        diagnostics=diagnostics,
    )


def coverage_u2u(
    params: ScenarioParams,
    thresholds_db: ArrayLike | None = None,
    *,
    field: InterferenceField | None = None,
    include_noise: bool = True,
    include_interference: bool = True,
) -> CoverageResult:
    """Coverage of the typical U2U link over a threshold grid (dB).

    Args:
        params: Scenario
        thresholds_db: SINR thresholds, strictly increasing; defaults to the
            scenario's coverage grid
        field: Reusable interference field for the UAV victim
        include_noise: Keep the thermal noise term
        include_interference: Keep the aggregate interference

    Returns:
        CoverageResult with LoS/NLoS serving branches and quadrature errors
    """
    return _coverage(
        Victim.UAV,
        params,
        thresholds_db,
        field=field,
        include_noise=include_noise,
        include_interference=include_interference,
    )


def coverage_gue(
    params: ScenarioParams,
    thresholds_db: ArrayLike | None = None,
    *,
    field: InterferenceField | None = None,
    include_noise: bool = True,
    include_interference: bool = True,
) -> CoverageResult:
    """Coverage of the typical GUE uplink at its serving BS.

    The serving GUE transmits with the clamped fractional power unless
    ``analytics.unclamped_serving_power`` asks for the unclamped ρζ^ε law; the
    diagnostics report how much serving mass the clamp touches.
    """
    return _coverage(
        Victim.BS,
        params,
        thresholds_db,
        field=field,
        include_noise=include_noise,
        include_interference=include_interference,
    )
