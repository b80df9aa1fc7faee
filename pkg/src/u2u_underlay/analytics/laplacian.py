"""Laplace transforms of the aggregate interference and their s-derivatives."""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import comb

from ..errors import NumericalError
from ..scenario.params import Condition, ScenarioParams, Victim
from .interference import (
    FootprintTable,
    InterferenceSpec,
    interference_integral,
    interference_specs,
)

logger = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 4


class InterferenceField:
    """Laplacian exponent η(s) seen by one victim type.

    η(s) = −2π Σ_families λ Σ_ξ I^ξ(s). With ``method="table"`` the step
    sums are tabulated once per family and condition on first use; with
    ``method="direct"`` every evaluation sums the cells exactly.
    """

    def __init__(
        self,
        params: ScenarioParams,
        victim: Victim,
        *,
        method: str | None = None,
        specs: tuple[InterferenceSpec, ...] | None = None,
    ):
        self.params = params
        self.victim = Victim(victim)
        self.method = method or params.analytics.method
        if self.method not in ("table", "direct"):
            raise ValueError(f"unknown evaluation method {self.method!r}")
        self.specs = specs if specs is not None else interference_specs(self.victim, params)
        self._tables: dict[tuple[str, Condition], FootprintTable] = {}

    def table(self, spec: InterferenceSpec, xi: Condition) -> FootprintTable:
        key = (spec.name, Condition(xi))
        if key not in self._tables:
            analytics = self.params.analytics
            self._tables[key] = FootprintTable(
                spec,
                xi,
                log10_min=analytics.table_log10_load_min,
                log10_max=analytics.table_log10_load_max,
                points_per_decade=analytics.table_points_per_decade,
            )
        return self._tables[key]

    @property
    def table_fallbacks(self) -> int:
        """Loads evaluated exactly because they fell outside a table."""
        return sum(t.fallback_count for t in self._tables.values())

    def family_integral(
        self, spec: InterferenceSpec, xi: Condition, s: ArrayLike
    ) -> NDArray[np.float64]:
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        if spec.density == 0:
            return np.zeros(s_arr.shape)
        if self.method == "direct":
            values = [interference_integral(spec, xi, float(v)) for v in s_arr.ravel()]
            return np.array(values).reshape(s_arr.shape)

        table = self.table(spec, xi)
        sources = spec.sources
        flat = s_arr.reshape(-1)
        out = np.zeros(flat.shape)
        for nu in Condition:
            loads = flat[:, None] * sources.power[nu][None, :]
            out += table(loads) @ sources.quadrature_weights(nu)
        return out.reshape(s_arr.shape)

    def breakdown(self, s: ArrayLike) -> dict[str, NDArray[np.float64]]:
        """Contribution −2πλΣ_ξ I^ξ of each family to η(s)."""
        parts: dict[str, NDArray[np.float64]] = {}
        for spec in self.specs:
            total = sum(self.family_integral(spec, xi, s) for xi in Condition)
            parts[spec.name] = -2.0 * math.pi * spec.density * np.asarray(total)
        return parts

    def exponent(self, s: ArrayLike) -> float | NDArray[np.float64]:
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < 0) or np.any(np.isnan(s_arr)):
            raise ValueError("Laplace variable must be non-negative")
        eta = sum(self.breakdown(s_arr).values())
        return np.asarray(eta).reshape(s_arr.shape)[()]

    def laplacian(self, s: ArrayLike) -> float | NDArray[np.float64]:
        return np.exp(self.exponent(s))


def laplacian_u2u(
    s: ArrayLike, params: ScenarioParams, field: InterferenceField | None = None
) -> float | NDArray[np.float64]:
    """Laplacian of the interference at the typical UAV receiver.

    exp(−2π[λ_u Σ_ξ I_uu^ξ(s) + λ_b Σ_ξ I_gu^ξ(s)]), one active GUE per cell.
    """
    field = field or InterferenceField(params, Victim.UAV)
    return field.laplacian(s)


def laplacian_gue(
    s: ArrayLike, params: ScenarioParams, field: InterferenceField | None = None
) -> float | NDArray[np.float64]:
    """Laplacian of the interference at the typical BS.

    Product of the UAV factor, with the BS pattern applied per grid cell,
    and the other-cell GUE factor, whose step sums start at each
    interferer's own serving distance.
    """
    field = field or InterferenceField(params, Victim.BS)
    return field.laplacian(s)


@dataclass(frozen=True)
class DerivativeEstimate:
    """L^{(0..n)}(s) with error estimates, plus the η^{(1..n)} they came from."""

    values: NDArray[np.float64]
    errors: NDArray[np.float64]
    eta_derivatives: NDArray[np.float64]

    @property
    def order(self) -> int:
        return self.values.shape[0] - 1


def _central_difference(
    eta: Callable[[NDArray[np.float64]], ArrayLike],
    s: NDArray[np.float64],
    k: int,
    steps: NDArray[np.float64],
) -> NDArray[np.float64]:
    """k-th central differences of η for every (level, s) pair."""
    offsets = k / 2.0 - np.arange(k + 1)
    coeffs = (-1.0) ** np.arange(k + 1) * comb(k, np.arange(k + 1))
    points = s[None, None, :] + offsets[None, :, None] * steps[:, None, :]
    values = np.asarray(eta(points.reshape(-1)), dtype=float).reshape(points.shape)
    return np.einsum("j,ljn->ln", coeffs, values) / steps**k


def _richardson(estimates: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Extrapolate step-halving estimates with an h² error series.

    Returns the diagonal tableau entry with the smallest change from its
    predecessor, and that change as the error estimate.
    """
    levels = estimates.shape[0]
    tableau = [[estimates[0]]]
    best = estimates[0].copy()
    best_err = np.full(best.shape, np.inf)
    for i in range(1, levels):
        row = [estimates[i]]
        for j in range(1, i + 1):
            prev = row[j - 1]
            row.append(prev + (prev - tableau[i - 1][j - 1]) / (4.0**j - 1.0))
        err = np.abs(row[i] - tableau[i - 1][i - 1])
        better = err < best_err
        best = np.where(better, row[i], best)
        best_err = np.where(better, err, best_err)
        tableau.append(row)
    return best, best_err


def laplacian_derivatives(
    log_laplacian: Callable[[NDArray[np.float64]], ArrayLike],
    s: ArrayLike,
    order: int,
    *,
    levels: int = 6,
    rtol: float = 1e-3,
    strict: bool = False,
) -> DerivativeEstimate:
    """Derivatives D^i[L](s), i = 0..order, of L = exp(η).

    η^{(k)} comes from Richardson-extrapolated central differences with
    steps s/k, s/2k, ...; the derivatives of L follow from the recursion
    L^{(n)} = Σ_k C(n−1, k) η^{(k+1)} L^{(n−1−k)}.

    Args:
        log_laplacian: η, vectorized over a 1-D array of s values
        s: Evaluation point(s), all positive
        order: Highest derivative wanted
        levels: Number of step halvings
        rtol: Relative error above which an extrapolation counts as unstable
        strict: Raise instead of logging a warning for unstable extrapolation

    Raises:
        ValueError: If s is not positive or order is negative
        NumericalError: If order exceeds MAX_DERIVATIVE_ORDER, η is not
            finite, or (strict) an extrapolation is unstable
    """
    if order < 0:
        raise ValueError(f"derivative order must be non-negative, got {order}")
    if order > MAX_DERIVATIVE_ORDER:
        raise NumericalError(
            f"derivative order {order} exceeds supported maximum {MAX_DERIVATIVE_ORDER}",
            order=order,
        )
    s_arr = np.asarray(s, dtype=float)
    shape = s_arr.shape
    flat = s_arr.reshape(-1)
    if np.any(~(flat > 0)):
        raise ValueError("derivatives are taken at positive s only")

    eta0 = np.asarray(log_laplacian(flat), dtype=float).reshape(flat.shape)
    if not np.all(np.isfinite(eta0)):
        raise NumericalError("log-Laplacian is not finite", s=flat[~np.isfinite(eta0)])

    eta_d = np.zeros((order + 1, flat.size))
    eta_err = np.zeros((order + 1, flat.size))
    eta_d[0] = eta0
    for k in range(1, order + 1):
        steps = (flat / k)[None, :] / 2.0 ** np.arange(levels)[:, None]
        estimates = _central_difference(log_laplacian, flat, k, steps)
        eta_d[k], eta_err[k] = _richardson(estimates)
        scale = np.maximum(np.abs(eta_d[k]), np.abs(eta0) / flat**k)
        unstable = eta_err[k] > rtol * scale
        if np.any(unstable):
            message = (
                f"unstable extrapolation of eta^({k}) at {int(unstable.sum())} point(s), "
                f"worst relative error {float(np.max(eta_err[k] / scale)):.2e}"
            )
            if strict:
                raise NumericalError(message, order=k, s=flat[unstable])
            logger.warning(message)

    values = np.zeros((order + 1, flat.size))
    errors = np.zeros((order + 1, flat.size))
    values[0] = np.exp(eta0)
    for n in range(1, order + 1):
        for k in range(n):
            c = math.comb(n - 1, k)
            values[n] += c * eta_d[k + 1] * values[n - 1 - k]
            errors[n] += c * (
                eta_err[k + 1] * np.abs(values[n - 1 - k])
                + np.abs(eta_d[k + 1]) * errors[n - 1 - k]
            )

    return DerivativeEstimate(
        values=values.reshape((order + 1, *shape)),
        errors=errors.reshape((order + 1, *shape)),
        eta_derivatives=eta_d[1:].reshape((order, *shape)),
    )
