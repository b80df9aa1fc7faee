"""Per-family interference integrals over the LoS step grid.

An interference family is one (source type, victim type) pair, for example
GUEs interfering at a UAV receiver. For interference-link condition ξ and
Laplace variable s its integral is

    I^ξ(s) = Σ_ν ∫ f^ν(x) Σ_i p^ξ_i [Ψ(s_i, r_{i+1}) − Ψ(s_i, r_i)] dx,
    s_i = s·g(r_i)/τ̂^ξ,

with the interferer power P^ν(x) inside Ψ. The Laplacian exponent of the
family is −2π·λ·Σ_ξ I^ξ. For GUEs at a BS the source density is encoded by
association: an interferer whose own serving distance is x only contributes
from x outward, and the cell holding x starts at x.

Because Ψ depends on s and P only through the product sP (the load), the
inner step sum is a one-variable function of the load. ``FootprintTable``
tabulates it once per family and condition so that the outer integrals only
interpolate.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import CubicSpline

from ..channel.antenna import bs_antenna_gain
from ..channel.geometry import LinkGeometry, zenith_angle_at_bs
from ..channel.los import LosStepFunction, los_step_table
from ..scenario.params import (
    AntennaParams,
    Condition,
    LinkClass,
    LinkType,
    NodeRole,
    ScenarioParams,
    Victim,
)
from ..special.psi import annulus_interference, psi, psi_difference
from .quadrature import grid_edges
from .sources import SourcePowerModel, source_power_model

logger = logging.getLogger(__name__)

EARLY_STOP_RTOL = 1e-9
EARLY_STOP_RUN = 3
_BLOCK_CELLS = 64


@dataclass(frozen=True)
class BsGainProfile:
    """BS antenna gain towards a source at height ``h_source`` vs horizontal distance."""

    h_source: float
    h_bs: float
    antenna: AntennaParams

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        geometry = LinkGeometry.batch(r, self.h_source, self.h_bs)
        return np.asarray(bs_antenna_gain(zenith_angle_at_bs(geometry), self.antenna))

    @property
    def peak(self) -> float:
        """Upper bound of the pattern over all angles."""
        return self.antenna.element_peak_gain * self.antenna.n_elements


@dataclass(frozen=True)
class CellGrid:
    """Annular cells [lo, hi) with LoS weight p and victim gain per cell."""

    lo: NDArray[np.float64]
    hi: NDArray[np.float64]
    p: NDArray[np.float64]
    gain: NDArray[np.float64]

    @property
    def n_cells(self) -> int:
        return int(self.lo.size)

    @property
    def outer_edge(self) -> float:
        return float(self.hi[-1])

    @property
    def constant_gain(self) -> bool:
        return bool(np.all(self.gain == self.gain[0]))

    def subset(self, sl: slice) -> "CellGrid":
        return CellGrid(self.lo[sl], self.hi[sl], self.p[sl], self.gain[sl])

    def containing(self, x: ArrayLike) -> NDArray[np.int64]:
        """Index of the cell holding each x (x beyond the grid maps past the end)."""
        x_arr = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.lo, x_arr, side="right") - 1
        beyond = x_arr >= self.hi[np.clip(idx, 0, self.n_cells - 1)]
        return np.where(beyond, self.n_cells, idx)


@dataclass(frozen=True)
class InterferenceSpec:
    """Everything needed to integrate one interference family."""

    link_type: LinkType
    density: float
    sources: SourcePowerModel
    los: LosStepFunction
    classes: dict[Condition, LinkClass]
    height_difference: float
    grid_spacing: float
    radius: float = math.inf
    victim_gain: BsGainProfile | None = None
    associated: bool = False
    far_field_radius: float = 100_000.0
    gain_subcells: int = 1
    coarse_sources: SourcePowerModel | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.density < 0:
            raise ValueError(f"source density must be non-negative, got {self.density}")
        for cls in self.classes.values():
            if not cls.alpha > 2.0:
                raise ValueError(
                    f"{cls.key}: interference integrals need alpha > 2, got {cls.alpha}"
                )
        if self.gain_subcells < 1:
            raise ValueError("gain_subcells must be >= 1")

    @property
    def name(self) -> str:
        return str(self.link_type)

    @property
    def victim(self) -> Victim:
        return Victim.BS if self.link_type.touches_bs else Victim.UAV

    def link_class(self, xi: Condition) -> LinkClass:
        return self.classes[Condition(xi)]

    def gain_at(self, r: ArrayLike) -> NDArray[np.float64]:
        r_arr = np.asarray(r, dtype=float)
        if self.victim_gain is None:
            return np.ones_like(r_arr)
        return self.victim_gain(r_arr)

    def peak_gain(self) -> float:
        return 1.0 if self.victim_gain is None else self.victim_gain.peak

    def cell_grid(self, xi: Condition) -> CellGrid:
        """Cells out to the interference radius.

        An infinite radius ends with one unbounded cell, exact because
        Ψ(s, ∞) = 0. Omnidirectional victims open it where the LoS table
        ends; BS victims first continue to the far-field radius so the
        pattern has flattened out.
        """
        spacing = self.grid_spacing
        if math.isfinite(self.radius):
            edges = grid_edges(self.radius, spacing)
        else:
            end = self.los.extent
            if self.victim_gain is not None:
                end = max(end, math.ceil(self.far_field_radius / spacing) * spacing)
            edges = grid_edges(end, spacing)

        parent_lo, parent_hi = edges[:-1], edges[1:]
        k = self.gain_subcells
        if k > 1:
            fractions = np.arange(k + 1) / k
            sub = parent_lo[:, None] + (parent_hi - parent_lo)[:, None] * fractions[None, :]
            lo, hi = sub[:, :-1].reshape(-1), sub[:, 1:].reshape(-1)
            p_los = np.repeat(np.asarray(self.los(parent_lo)), k)
        else:
            lo, hi = parent_lo, parent_hi
            p_los = np.asarray(self.los(parent_lo))

        if not math.isfinite(self.radius):
            tail_start = float(edges[-1])
            lo = np.append(lo, tail_start)
            hi = np.append(hi, math.inf)
            p_los = np.append(p_los, float(self.los(tail_start)))

        p = p_los if Condition(xi) is Condition.LOS else 1.0 - p_los
        return CellGrid(lo=lo, hi=hi, p=p, gain=self.gain_at(lo))


def cell_increments(
    cells: CellGrid,
    cls: LinkClass,
    h: float,
    load: ArrayLike,
    *,
    lo: NDArray[np.float64] | None = None,
    gain: NDArray[np.float64] | None = None,
) -> NDArray[np.float64]:
    """p_i [Ψ(s_i, hi_i) − Ψ(s_i, lo_i)] for every cell, shape load.shape + (n_cells,)."""
    load_arr = np.asarray(load, dtype=float)[..., None]
    g = cells.gain if gain is None else gain
    lower = cells.lo if lo is None else lo
    eff = load_arr * g / cls.tau_hat
    inc = psi_difference(eff, lower, cells.hi, h, cls.alpha, cls.m_fading)
    return cells.p * np.asarray(inc)


def step_sum(
    cells: CellGrid,
    cls: LinkClass,
    h: float,
    load: ArrayLike,
    *,
    start: ArrayLike | None = None,
    start_gain: ArrayLike | None = None,
) -> NDArray[np.float64]:
    """Σ_i p_i [Ψ(s_i, r_{i+1}) − Ψ(s_i, r_i)] for each load.

    With ``start`` (broadcastable to ``load``) the sum begins at that radius:
    earlier cells drop out and the cell holding it is cut at it, using
    ``start_gain`` as its gain.
    """
    if start is None:
        return cell_increments(cells, cls, h, load).sum(axis=-1)

    load_arr = np.asarray(load, dtype=float)
    start_arr = np.broadcast_to(np.asarray(start, dtype=float), load_arr.shape)[..., None]
    if start_gain is None:
        raise ValueError("start_gain is required together with start")
    s_gain = np.broadcast_to(np.asarray(start_gain, dtype=float), load_arr.shape)[..., None]

    lo = np.maximum(cells.lo, start_arr)
    gain = np.where(cells.lo < start_arr, s_gain, cells.gain)
    inc = cell_increments(cells, cls, h, load_arr, lo=lo, gain=gain)
    return np.where(cells.hi > start_arr, inc, 0.0).sum(axis=-1)


def step_sum_telescoped(
    cells: CellGrid, cls: LinkClass, h: float, load: ArrayLike
) -> NDArray[np.float64]:
    """Summation-by-parts form Σ_i (p_{i−1} − p_i) Ψ(s, r_i) + p_N Ψ(s, r_{N+1}).

    Only valid when the victim gain (hence s) is the same in every cell.
    """
    if not cells.constant_gain:
        raise ValueError("the telescoped step sum needs a constant victim gain")
    load_arr = np.asarray(load, dtype=float)[..., None]
    eff = load_arr * cells.gain[0] / cls.tau_hat
    p_prev = np.concatenate(([0.0], cells.p[:-1]))
    edge_psi = np.asarray(psi(eff, cells.lo, h, cls.alpha, cls.m_fading))
    boundary = np.asarray(psi(eff[..., 0], cells.hi[-1], h, cls.alpha, cls.m_fading))
    return ((p_prev - cells.p) * edge_psi).sum(axis=-1) + cells.p[-1] * boundary


class FootprintTable:
    """Step sum of one family and condition tabulated against the load.

    Values are interpolated with a cubic spline in log-log coordinates.
    Associated families get one column per source node, since their sum
    starts at the node's serving distance. Loads outside the table range
    are evaluated exactly.
    """

    def __init__(
        self,
        spec: InterferenceSpec,
        xi: Condition,
        *,
        log10_min: float = -4.0,
        log10_max: float = 30.0,
        points_per_decade: int = 24,
    ):
        self.spec = spec
        self.xi = Condition(xi)
        self.cls = spec.link_class(xi)
        self.cells = spec.cell_grid(xi)
        self.fallback_count = 0

        n_points = int(round((log10_max - log10_min) * points_per_decade)) + 1
        self.log_load = np.linspace(log10_min, log10_max, n_points) * math.log(10.0)
        loads = np.exp(self.log_load)
        h = spec.height_difference

        if spec.associated:
            self._starts = spec.sources.nodes
            self._start_gain = spec.gain_at(self._starts)
            values = self._associated_values(loads)
        else:
            self._starts = None
            self._start_gain = None
            values = step_sum(self.cells, self.cls, h, loads)[:, None]

        self.n_columns = values.shape[1]
        # Columns that vanish anywhere cannot live in log space
        self._exact_only = ~np.all(values > 0, axis=0)
        safe = np.where(values > 0, values, 1.0)
        spline = CubicSpline(self.log_load, np.log(safe), axis=0)
        self._coef = spline.c
        logger.debug(
            f"Footprint table {spec.name}.{self.xi}: {n_points} loads x "
            f"{self.cells.n_cells} cells x {self.n_columns} columns, "
            f"{self.exact_columns} evaluated exactly"
        )

    @property
    def exact_columns(self) -> int:
        """Columns that vanish at some load and bypass interpolation."""
        return int(self._exact_only.sum())

    def _associated_values(self, loads: NDArray[np.float64]) -> NDArray[np.float64]:
        cells, cls, h = self.cells, self.cls, self.spec.height_difference
        inc = cell_increments(cells, cls, h, loads)
        # after[:, k] = Σ_{i≥k} inc[:, i], with after[:, n_cells] = 0
        after = np.concatenate(
            (np.cumsum(inc[:, ::-1], axis=1)[:, ::-1], np.zeros((loads.size, 1))), axis=1
        )
        starts = self._starts
        assert starts is not None and self._start_gain is not None
        k = cells.containing(starts)
        inside = k < cells.n_cells
        k_safe = np.minimum(k, cells.n_cells - 1)

        eff = loads[:, None] * self._start_gain[None, :] / cls.tau_hat
        partial = cells.p[k_safe] * np.asarray(
            psi_difference(eff, starts, cells.hi[k_safe], h, cls.alpha, cls.m_fading)
        )
        values = after[:, np.minimum(k + 1, cells.n_cells)] + partial
        return np.where(inside[None, :], values, 0.0)

    def exact(self, load: ArrayLike, column: ArrayLike | int = 0) -> NDArray[np.float64]:
        load_arr = np.asarray(load, dtype=float)
        h = self.spec.height_difference
        if self._starts is None:
            return step_sum(self.cells, self.cls, h, load_arr)
        col = np.broadcast_to(np.asarray(column), load_arr.shape)
        return step_sum(
            self.cells,
            self.cls,
            h,
            load_arr,
            start=self._starts[col],
            start_gain=self._start_gain[col],
        )

    def __call__(self, load: ArrayLike) -> NDArray[np.float64]:
        """Interpolated step sum; for associated tables the last axis indexes columns."""
        load_arr = np.asarray(load, dtype=float)
        if self.n_columns > 1:
            if load_arr.shape[-1] != self.n_columns:
                raise ValueError(
                    f"expected last axis of length {self.n_columns}, got {load_arr.shape}"
                )
            column = np.broadcast_to(np.arange(self.n_columns), load_arr.shape)
        else:
            column = np.zeros(load_arr.shape, dtype=np.int64)

        out = np.zeros(load_arr.shape)
        positive = load_arr > 0
        with np.errstate(divide="ignore"):
            t = np.log(np.where(positive, load_arr, 1.0))
        in_range = (
            positive
            & (t >= self.log_load[0])
            & (t <= self.log_load[-1])
            & ~self._exact_only[column]
        )

        idx = np.clip(np.searchsorted(self.log_load, t, side="right") - 1, 0, self.log_load.size - 2)
        dt = t - self.log_load[idx]
        c = self._coef[:, idx, column]
        y = ((c[0] * dt + c[1]) * dt + c[2]) * dt + c[3]
        out[in_range] = np.exp(y[in_range])

        fallback = positive & ~in_range
        if np.any(fallback):
            self.fallback_count += int(fallback.sum())
            out[fallback] = self.exact(load_arr[fallback], column[fallback])
        return out


def _bound_beyond(
    spec: InterferenceSpec,
    xi: Condition,
    sources: SourcePowerModel,
    s: float,
    r_from: float,
) -> float:
    """Upper bound of the contribution from r_from outward (p ≤ 1, peak gain)."""
    if math.isinf(r_from):
        return 0.0
    cls = spec.link_class(xi)
    bound = 0.0
    for nu in Condition:
        load = s * sources.power[nu] * spec.peak_gain() / cls.tau_hat
        tail = annulus_interference(load, r_from, math.inf, spec.height_difference, cls.alpha)
        bound += float(np.dot(sources.quadrature_weights(nu), np.asarray(tail)))
    return bound


def _direct_integral(
    spec: InterferenceSpec,
    xi: Condition,
    s: float,
    sources: SourcePowerModel,
    *,
    early_stop: bool = True,
) -> tuple[float, int | None, int]:
    cells = spec.cell_grid(xi)
    cls = spec.link_class(xi)
    h = spec.height_difference
    starts = sources.nodes if spec.associated else None
    start_gain = spec.gain_at(sources.nodes) if spec.associated else None

    loads = {nu: s * sources.power[nu] for nu in Condition}
    weights = {nu: sources.quadrature_weights(nu) for nu in Condition}

    accumulated = 0.0
    run = 0
    for block_start in range(0, cells.n_cells, _BLOCK_CELLS):
        block = cells.subset(slice(block_start, block_start + _BLOCK_CELLS))
        per_cell = np.zeros(block.n_cells)
        for nu in Condition:
            if starts is None:
                inc = cell_increments(block, cls, h, loads[nu])
            else:
                start_col = starts[:, None]
                lo = np.maximum(block.lo, start_col)
                gain = np.where(block.lo < start_col, start_gain[:, None], block.gain)
                inc = cell_increments(block, cls, h, loads[nu], lo=lo, gain=gain)
                inc = np.where(block.hi > start_col, inc, 0.0)
            per_cell += weights[nu] @ inc

        for offset, term in enumerate(per_cell):
            accumulated += float(term)
            if early_stop and abs(term) < EARLY_STOP_RTOL * abs(accumulated):
                run += 1
            else:
                run = 0
            if run >= EARLY_STOP_RUN:
                return accumulated, block_start + offset + 1, cells.n_cells
    return accumulated, None, cells.n_cells


def interference_integral(
    spec: InterferenceSpec,
    xi: Condition,
    s: float,
    *,
    table: FootprintTable | None = None,
    full_output: bool = False,
) -> float | tuple[float, dict[str, Any]]:
    """Evaluate I^ξ(s) for one interference family.

    Args:
        spec: The interference family
        xi: Condition of the interference links
        s: Laplace variable of the victim (before gain and reference loss)
        table: Optional footprint table for this family and condition; when
            omitted the step sums are evaluated exactly, stopping once three
            consecutive cells add less than 1e-9 of the running total
        full_output: Also return diagnostics (cells used, stop cell, a bound
            on the neglected far field, and a quadrature error estimate from
            a coarser serving-distance rule)

    Raises:
        ValueError: If s is negative
    """
    if s < 0 or math.isnan(s):
        raise ValueError(f"Laplace variable must be non-negative, got {s}")
    xi = Condition(xi)
    sources = spec.sources
    diagnostics: dict[str, Any] = {"family": spec.name, "condition": str(xi)}

    if s == 0:
        value = 0.0
        diagnostics.update(cells=0, stop_cell=None, tail_bound=0.0, quad_err=0.0)
        return (value, diagnostics) if full_output else value

    if table is not None:
        value = 0.0
        for nu in Condition:
            value += float(np.dot(sources.quadrature_weights(nu), table(s * sources.power[nu])))
        stop_cell, n_cells = None, table.cells.n_cells
    else:
        value, stop_cell, n_cells = _direct_integral(spec, xi, s, sources)

    if not full_output:
        return value

    cells = spec.cell_grid(xi)
    if stop_cell is not None:
        r_from = float(cells.lo[stop_cell]) if stop_cell < cells.n_cells else cells.outer_edge
    else:
        r_from = cells.outer_edge
    quad_err = math.nan
    if spec.coarse_sources is not None:
        coarse, _, _ = _direct_integral(spec, xi, s, spec.coarse_sources, early_stop=False)
        quad_err = abs(value - coarse)
    diagnostics.update(
        cells=n_cells,
        stop_cell=stop_cell,
        tail_bound=_bound_beyond(spec, xi, sources, s, r_from),
        quad_err=quad_err,
    )
    return value, diagnostics


# Family builders


def _classes(params: ScenarioParams, link_type: LinkType) -> dict[Condition, LinkClass]:
    return {c: params.link_class(link_type, c) for c in Condition}


def _spec(
    params: ScenarioParams,
    link_type: LinkType,
    density: float,
    role: NodeRole,
    *,
    sources: SourcePowerModel | None,
    associated: bool = False,
) -> InterferenceSpec:
    analytics = params.analytics
    h_x, h_y = params.link_heights(link_type)
    gain = BsGainProfile(h_x, h_y, params.antenna) if link_type.touches_bs else None
    coarse_order = max(2, analytics.source_nodes_per_cell // 2)
    return InterferenceSpec(
        link_type=link_type,
        density=density,
        sources=sources or source_power_model(role, params),
        los=los_step_table(link_type, params),
        classes=_classes(params, link_type),
        height_difference=abs(h_x - h_y),
        grid_spacing=params.los_grid_spacing_m,
        radius=params.interference_radius_m,
        victim_gain=gain,
        associated=associated,
        far_field_radius=analytics.far_field_radius_m,
        gain_subcells=analytics.gain_subcells,
        coarse_sources=source_power_model(role, params, nodes_per_cell=coarse_order),
    )


def uav_to_uav_spec(
    params: ScenarioParams, sources: SourcePowerModel | None = None
) -> InterferenceSpec:
    """Other U2U transmitters at the typical UAV receiver (density λ_u)."""
    return _spec(params, LinkType.UU, params.lambda_u, NodeRole.UAV, sources=sources)


def gue_to_uav_spec(
    params: ScenarioParams, sources: SourcePowerModel | None = None
) -> InterferenceSpec:
    """Active GUEs at the typical UAV receiver (density λ_b, one per cell)."""
    return _spec(params, LinkType.GU, params.lambda_b, NodeRole.GUE, sources=sources)


def uav_to_bs_spec(
    params: ScenarioParams, sources: SourcePowerModel | None = None
) -> InterferenceSpec:
    """U2U transmitters at the typical BS, seen through its antenna pattern."""
    return _spec(params, LinkType.UB, params.lambda_u, NodeRole.UAV, sources=sources)


def gue_to_bs_spec(
    params: ScenarioParams, sources: SourcePowerModel | None = None
) -> InterferenceSpec:
    """Other-cell GUEs at the typical BS.

    Density λ_b(1 − e^{−λ_bπr²}) arises from association: a GUE served at
    distance x is farther than x from the typical BS.
    """
    return _spec(
        params, LinkType.GB, params.lambda_b, NodeRole.GUE, sources=sources, associated=True
    )


def interference_specs(
    victim: Victim, params: ScenarioParams
) -> tuple[InterferenceSpec, InterferenceSpec]:
    """The two interference families (UAV sources, GUE sources) seen by a victim."""
    uav_sources = source_power_model(NodeRole.UAV, params)
    gue_sources = source_power_model(NodeRole.GUE, params)
    if Victim(victim) is Victim.UAV:
        return uav_to_uav_spec(params, uav_sources), gue_to_uav_spec(params, gue_sources)
    return uav_to_bs_spec(params, uav_sources), gue_to_bs_spec(params, gue_sources)
