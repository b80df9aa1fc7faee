"""Fixed Gauss–Legendre panels aligned with the LoS grid."""

import math
from functools import cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray


@cache
def _reference_rule(order: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    return leggauss(order)


def grid_edges(upper: float, spacing: float) -> NDArray[np.float64]:
    """Edges 0, Δ, 2Δ, … closed by ``upper`` (finite)."""
    n_full = math.floor(upper / spacing + 1e-9)
    edges = np.arange(n_full + 1, dtype=float) * spacing
    if upper - edges[-1] > 1e-9 * spacing:
        edges = np.append(edges, upper)
    else:
        edges[-1] = upper
    return edges


def interior_breakpoints(upper: float, spacing: float) -> list[float]:
    """Grid points strictly inside (0, upper)."""
    return [float(e) for e in grid_edges(upper, spacing)[1:-1]]


def panel_rule(
    edges: NDArray[np.float64], order: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Gauss–Legendre nodes and weights, ``order`` points on every panel."""
    ref_nodes, ref_weights = _reference_rule(order)
    lo = edges[:-1, None]
    half = (edges[1:, None] - lo) / 2.0
    nodes = lo + half * (ref_nodes[None, :] + 1.0)
    weights = half * ref_weights[None, :]
    return nodes.reshape(-1), weights.reshape(-1)
