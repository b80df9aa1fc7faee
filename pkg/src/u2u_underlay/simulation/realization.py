"""Network drops: one snapshot of every point process and link state.

A drop places a typical U2U receiver and a typical BS at the origin and
samples, inside a disc:

- U2U transmitters as a PPP of density λ_u, each with its own pair distance
  (truncated Rayleigh) and serving condition setting its power;
- active GUEs as a PPP of density λ_b, one per cell on the observed PRB.

GUE association has two modes. In mode A each GUE draws its serving distance
from the Rayleigh law and interferes at the typical BS when that distance is
shorter than its distance to the origin. In mode B BSs are placed explicitly
out to the disc plus a margin, every BS gets exactly one active GUE placed
uniformly in its Voronoi cell (cKDTree), and GUEs inside the disc are kept.
The GUE of the origin BS is in-cell and does not interfere there.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from ..analytics.distances import sample_rayleigh, sample_truncated_rayleigh
from ..channel.geometry import LinkGeometry
from ..channel.los import LosStepFunction, los_step_table
from ..channel.propagation import large_scale_fading, sample_fading, transmit_power
from ..scenario.params import Condition, LinkType, NodeRole, ScenarioParams, sigma_g

logger = logging.getLogger(__name__)

CANDIDATES_PER_CELL = 20


def drop_rng(seed: int, drop_idx: int) -> np.random.Generator:
    """Counter-based stream of one drop, independent of execution order."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(drop_idx,)))
    )


def check_disc_radius(params: ScenarioParams) -> bool:
    """Warn when the simulated disc is smaller than the analytic integration region."""
    disc = params.simulation.disc_radius_m
    radius = params.interference_radius_m
    if disc < radius:
        logger.warning(
            f"Simulation disc ({disc:.0f} m) is smaller than the analytic interference "
            f"radius ({radius:.0f} m); far-field interference is missing from the drops"
        )
        return False
    return True


LosTables = dict[LinkType, LosStepFunction]


def los_tables(params: ScenarioParams) -> LosTables:
    return {link_type: los_step_table(link_type, params) for link_type in LinkType}


@dataclass(frozen=True)
class LinkSet:
    """Transmitters of one kind seen by one victim."""

    link_type: LinkType
    r_2d: NDArray[np.float64]
    power: NDArray[np.float64]
    los: NDArray[np.bool_]
    fading: NDArray[np.float64]

    def __post_init__(self) -> None:
        n = self.r_2d.size
        if not (self.power.size == self.los.size == self.fading.size == n):
            raise ValueError(f"{self.link_type}: link arrays must have equal length")

    def __len__(self) -> int:
        return int(self.r_2d.size)

    @classmethod
    def empty(cls, link_type: LinkType) -> "LinkSet":
        return cls(
            link_type=link_type,
            r_2d=np.zeros(0),
            power=np.zeros(0),
            los=np.zeros(0, dtype=bool),
            fading=np.zeros(0),
        )


@dataclass(frozen=True)
class ServingLink:
    """The typical victim's own link."""

    link_type: LinkType
    r_2d: float
    los: bool
    fading: float
    power: float

    @property
    def condition(self) -> Condition:
        return Condition.LOS if self.los else Condition.NLOS


@dataclass(frozen=True)
class NetworkRealization:
    """One drop, with the interferers already split per victim."""

    drop_idx: int
    u2u_pair: ServingLink
    gue_serving: ServingLink
    uav_at_uav: LinkSet
    gue_at_uav: LinkSet
    uav_at_bs: LinkSet
    gue_at_bs: LinkSet
    uav_positions: NDArray[np.float64]
    uav_pair_distances: NDArray[np.float64]
    gue_positions: NDArray[np.float64]
    gue_serving_distances: NDArray[np.float64]
    n_bs: int = 0
    # mode B: index of the serving BS of every GUE (0 is the typical BS)
    gue_cells: NDArray[np.int64] = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def n_uav(self) -> int:
        return int(self.uav_positions.shape[0])

    @property
    def n_gue(self) -> int:
        return int(self.gue_positions.shape[0])


def zeta_by_condition(
    link_type: LinkType,
    r_2d: NDArray[np.float64],
    los: NDArray[np.bool_],
    params: ScenarioParams,
) -> NDArray[np.float64]:
    """Large-scale fading of a batch of links, each with its own condition."""
    if r_2d.size == 0:
        return np.zeros(0)
    h_x, h_y = params.link_heights(link_type)
    geometry = LinkGeometry.batch(r_2d, h_x, h_y)
    z_los = large_scale_fading(geometry, params.link_class(link_type, Condition.LOS), params.antenna)
    z_nlos = large_scale_fading(
        geometry, params.link_class(link_type, Condition.NLOS), params.antenna
    )
    return np.where(los, z_los, z_nlos)


def sample_ppp_disc(
    rng: np.random.Generator, density: float, radius: float
) -> NDArray[np.float64]:
    """Homogeneous PPP in a disc centred on the origin, shape (n, 2)."""
    n = rng.poisson(density * math.pi * radius**2)
    r = radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(phi), r * np.sin(phi)))


def one_gue_per_cell(
    rng: np.random.Generator,
    bs_xy: NDArray[np.float64],
    density: float,
    radius: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.int64]]:
    """One active GUE placed uniformly in the Voronoi cell of every BS.

    Candidates from a PPP CANDIDATES_PER_CELL times denser than the BSs are
    attached to their nearest BS and one of them is kept per BS at random.
    A cell left without candidates has no active GUE in this drop, which
    for a cell of mean size happens with probability e^{−CANDIDATES_PER_CELL}.

    Returns:
        Positions, serving distances and serving-BS indices of the GUEs
    """
    candidates = sample_ppp_disc(rng, CANDIDATES_PER_CELL * density, radius)
    if candidates.shape[0] == 0 or bs_xy.shape[0] == 0:
        return np.zeros((0, 2)), np.zeros(0), np.zeros(0, dtype=np.int64)
    distance, owner = cKDTree(bs_xy).query(candidates)
    distance = np.asarray(distance, dtype=float)
    owner = np.asarray(owner, dtype=np.int64)
    order = rng.permutation(candidates.shape[0])
    _, first = np.unique(owner[order], return_index=True)
    pick = order[first]
    return candidates[pick], distance[pick], owner[pick]


def _draw_conditions(
    rng: np.random.Generator, table: LosStepFunction, r_2d: NDArray[np.float64]
) -> NDArray[np.bool_]:
    return rng.random(r_2d.size) < np.asarray(table(r_2d)).reshape(-1)


def _draw_fading(
    rng: np.random.Generator,
    link_type: LinkType,
    los: NDArray[np.bool_],
    params: ScenarioParams,
) -> NDArray[np.float64]:
    fading = np.empty(los.size)
    for condition, mask in ((Condition.LOS, los), (Condition.NLOS, ~los)):
        fading[mask] = sample_fading(params.link_class(link_type, condition), rng, int(mask.sum()))
    return fading


def _powers(
    rng: np.random.Generator,
    role: NodeRole,
    serving_distance: NDArray[np.float64],
    params: ScenarioParams,
    tables: LosTables,
) -> NDArray[np.float64]:
    """Fractional-power-control powers from each node's own serving link."""
    if serving_distance.size == 0:
        return np.zeros(0)
    link_type = LinkType.UU if role is NodeRole.UAV else LinkType.GB
    serving_los = _draw_conditions(rng, tables[link_type], serving_distance)
    zeta = zeta_by_condition(link_type, serving_distance, serving_los, params)
    return np.asarray(transmit_power(zeta, params.power_control, role), dtype=float).reshape(-1)


def _link_set(
    rng: np.random.Generator,
    link_type: LinkType,
    positions: NDArray[np.float64],
    power: NDArray[np.float64],
    params: ScenarioParams,
    tables: LosTables,
) -> LinkSet:
    r_2d = np.hypot(positions[:, 0], positions[:, 1])
    los = _draw_conditions(rng, tables[link_type], r_2d)
    fading = _draw_fading(rng, link_type, los, params)
    return LinkSet(link_type=link_type, r_2d=r_2d, power=power, los=los, fading=fading)


def _serving_link(
    rng: np.random.Generator,
    role: NodeRole,
    distance: float,
    params: ScenarioParams,
    tables: LosTables,
) -> ServingLink:
    link_type = LinkType.UU if role is NodeRole.UAV else LinkType.GB
    r = np.array([distance])
    los = _draw_conditions(rng, tables[link_type], r)
    fading = _draw_fading(rng, link_type, los, params)
    zeta = zeta_by_condition(link_type, r, los, params)
    power = float(np.asarray(transmit_power(zeta, params.power_control, role)).reshape(-1)[0])
    return ServingLink(
        link_type=link_type,
        r_2d=distance,
        los=bool(los[0]),
        fading=float(fading[0]),
        power=power,
    )


def drop_realization(
    params: ScenarioParams,
    rng: np.random.Generator,
    *,
    drop_idx: int = 0,
    tables: LosTables | None = None,
) -> NetworkRealization:
    """Sample one network realization.

    Args:
        params: Scenario
        rng: Stream of this drop (see ``drop_rng``)
        drop_idx: Index recorded on the realization
        tables: Pre-built LoS step tables, one per link type

    Returns:
        NetworkRealization with the interferer sets of both victims
    """
    tables = tables or los_tables(params)
    sim = params.simulation
    radius = sim.disc_radius_m
    sg = sigma_g(params)

    # Typical pair and typical BS's own GUE
    pair_distance = float(sample_truncated_rayleigh(rng, params.sigma_u, params.r_max, 1)[0])
    u2u_pair = _serving_link(rng, NodeRole.UAV, pair_distance, params, tables)
    gue_distance = float(sample_rayleigh(rng, sg, 1)[0])
    gue_serving = _serving_link(rng, NodeRole.GUE, gue_distance, params, tables)

    # U2U transmitters
    uav_xy = sample_ppp_disc(rng, params.lambda_u, radius)
    uav_pair = sample_truncated_rayleigh(rng, params.sigma_u, params.r_max, uav_xy.shape[0])
    uav_power = _powers(rng, NodeRole.UAV, uav_pair, params, tables)

    # Active GUEs and their association
    n_bs = 0
    gue_cells = np.zeros(0, dtype=np.int64)
    if sim.gue_mode == "A":
        gue_xy = sample_ppp_disc(rng, params.lambda_b, radius)
        gue_r = np.hypot(gue_xy[:, 0], gue_xy[:, 1])
        gue_x = sample_rayleigh(rng, sg, gue_xy.shape[0])
        other_cell = gue_x < gue_r
    else:
        outer = radius + sim.bs_margin_m
        bs_xy = np.vstack(([0.0, 0.0], sample_ppp_disc(rng, params.lambda_b, outer)))
        n_bs = bs_xy.shape[0]
        gue_xy, gue_x, gue_cells = one_gue_per_cell(rng, bs_xy, params.lambda_b, outer)
        inside = np.hypot(gue_xy[:, 0], gue_xy[:, 1]) <= radius
        gue_xy, gue_x, gue_cells = gue_xy[inside], gue_x[inside], gue_cells[inside]
        other_cell = gue_cells != 0
    gue_power = _powers(rng, NodeRole.GUE, gue_x, params, tables)

    return NetworkRealization(
        drop_idx=drop_idx,
        u2u_pair=u2u_pair,
        gue_serving=gue_serving,
        uav_at_uav=_link_set(rng, LinkType.UU, uav_xy, uav_power, params, tables),
        gue_at_uav=_link_set(rng, LinkType.GU, gue_xy, gue_power, params, tables),
        uav_at_bs=_link_set(rng, LinkType.UB, uav_xy, uav_power, params, tables),
        gue_at_bs=_link_set(
            rng, LinkType.GB, gue_xy[other_cell], gue_power[other_cell], params, tables
        ),
        uav_positions=uav_xy,
        uav_pair_distances=uav_pair,
        gue_positions=gue_xy,
        gue_serving_distances=gue_x,
        n_bs=n_bs,
        gue_cells=gue_cells,
    )
