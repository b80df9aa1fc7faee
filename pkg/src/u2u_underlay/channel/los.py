"""ITU line-of-sight probability and its step-function tabulation."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from ..scenario.params import LinkType, ScenarioParams
from .geometry import LinkGeometry

logger = logging.getLogger(__name__)

# Absorbs rounding when r sits exactly on a grid edge
_EDGE_TOLERANCE = 1e-9


def building_index_bound(
    r_2d: ArrayLike, a1: float, a2: float
) -> NDArray[np.int64]:
    """Upper index J = ⌊r·√(a₁a₂)/1000 − 1⌋ of the ITU product."""
    scaled = np.asarray(r_2d, dtype=float) * math.sqrt(a1 * a2) / 1000.0
    return np.floor(scaled - 1.0 + _EDGE_TOLERANCE).astype(np.int64)


def _product_for_bound(j_bound: int, h_x: float, h_y: float, a3: float) -> float:
    if j_bound < 0:
        return 1.0
    j = np.arange(j_bound + 1, dtype=float)
    ray_height = h_x - (j + 0.5) * (h_x - h_y) / (j_bound + 1)
    terms = -np.expm1(-(ray_height**2) / (2.0 * a3**2))
    return float(np.prod(terms))


def los_probability(
    geometry: LinkGeometry, a1: float, a2: float, a3: float
) -> float | NDArray[np.float64]:
    """ITU probability that no building blocks the x→y ray.

    The product runs over the J + 1 buildings crossed by the link, with the
    building-count denominator k + 1 taken as J + 1.
    """
    j_bound = building_index_bound(geometry.r_2d, a1, a2)
    unique_bounds, inverse = np.unique(j_bound, return_inverse=True)
    per_bound = np.array(
        [_product_for_bound(int(j), geometry.h_x, geometry.h_y, a3) for j in unique_bounds]
    )
    return per_bound[inverse].reshape(j_bound.shape)[()]


@dataclass(frozen=True)
class LosStepFunction:
    """Piecewise-constant LoS probability on a uniform distance grid.

    ``breakpoints[i]`` is the left edge of interval i; the last value
    persists beyond the final breakpoint.
    """

    breakpoints: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.breakpoints.ndim != 1 or self.breakpoints.shape != self.values.shape:
            raise ValueError("breakpoints and values must be 1-D arrays of equal length")
        if self.breakpoints.size == 0 or self.breakpoints[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if np.any(np.diff(self.breakpoints) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any((self.values < 0) | (self.values > 1)):
            raise ValueError("LoS probabilities must lie in [0, 1]")

    @property
    def spacing(self) -> float:
        if self.breakpoints.size < 2:
            return math.inf
        return float(self.breakpoints[1] - self.breakpoints[0])

    @property
    def extent(self) -> float:
        """End of the tabulated region (start of the persisting tail)."""
        return float(self.breakpoints[-1] + self.spacing)

    def cell_index(self, r: ArrayLike) -> NDArray[np.int64]:
        idx = np.searchsorted(self.breakpoints, np.asarray(r, dtype=float), side="right") - 1
        return np.clip(idx, 0, self.breakpoints.size - 1)

    def __call__(self, r: ArrayLike) -> float | NDArray[np.float64]:
        return self.values[self.cell_index(r)][()]

    def nlos(self, r: ArrayLike) -> float | NDArray[np.float64]:
        return (1.0 - self.values[self.cell_index(r)])[()]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"r_left_m": self.breakpoints, "p_los": self.values})

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        logger.info(f"Wrote LoS table with {self.values.size} cells to {path}")
        return path


def los_step_table(link_type: LinkType, params: ScenarioParams) -> LosStepFunction:
    """Tabulate the LoS probability of a link type on the ITU building grid.

    Grid edges are r_i = (i−1)·1000/√(a₁a₂) up to the scenario's truncation
    radius; each interval holds the probability at its left edge.
    """
    spacing = params.los_grid_spacing_m
    n_cells = max(1, round(params.los_truncation_radius_m / spacing))
    breakpoints = np.arange(n_cells, dtype=float) * spacing
    h_x, h_y = params.link_heights(link_type)
    values = np.asarray(
        los_probability(
            LinkGeometry.batch(breakpoints, h_x, h_y),
            params.itu_a1,
            params.itu_a2,
            params.itu_a3,
        ),
        dtype=float,
    ).reshape(-1)
    logger.debug(
        f"LoS table {link_type}: {n_cells} cells of {spacing:.2f} m, "
        f"tail value {values[-1]:.4g}"
    )
    return LosStepFunction(breakpoints=breakpoints, values=values)
