"""Transmit-power laws of interfering UAVs and GUEs.

An interferer's power follows from fractional power control on its own
serving link, so its distribution is that of the serving distance x split by
serving condition ν. The joint density f^ν(x) = p^ν(x)·f(x) sums to one over
ν, and it is discretized once on Gauss–Legendre panels that follow the LoS
grid, where p^ν is constant.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..channel.geometry import LinkGeometry
from ..channel.los import LosStepFunction, los_step_table
from ..channel.propagation import large_scale_fading, transmit_power
from ..scenario.params import Condition, LinkType, NodeRole, ScenarioParams, sigma_g
from .distances import rayleigh_cdf, rayleigh_pdf, truncated_rayleigh_pdf
from .quadrature import grid_edges, panel_rule

logger = logging.getLogger(__name__)

_MASS_TOLERANCE = 1e-6


def serving_link_type(role: NodeRole) -> LinkType:
    return LinkType.UU if role is NodeRole.UAV else LinkType.GB


def serving_support(role: NodeRole, params: ScenarioParams) -> float:
    """Upper end of the serving-distance integration range."""
    if role is NodeRole.UAV:
        return params.r_max
    return params.analytics.gue_outer_sigmas * sigma_g(params)


def serving_pdf(role: NodeRole, x: ArrayLike, params: ScenarioParams) -> NDArray[np.float64]:
    if role is NodeRole.UAV:
        return np.asarray(truncated_rayleigh_pdf(x, params.sigma_u, params.r_max))
    return np.asarray(rayleigh_pdf(x, sigma_g(params)))


def serving_zeta(
    role: NodeRole, condition: Condition, x: ArrayLike, params: ScenarioParams
) -> NDArray[np.float64]:
    """Large-scale fading of the serving link at serving distance x."""
    link_type = serving_link_type(role)
    h_x, h_y = params.link_heights(link_type)
    geometry = LinkGeometry.batch(x, h_x, h_y)
    cls = params.link_class(link_type, condition)
    return np.asarray(large_scale_fading(geometry, cls, params.antenna), dtype=float)


def serving_power(
    role: NodeRole,
    condition: Condition,
    x: ArrayLike,
    params: ScenarioParams,
    *,
    clamp: bool = True,
) -> NDArray[np.float64]:
    """Transmit power set by fractional power control on the serving link."""
    zeta = serving_zeta(role, condition, x, params)
    if clamp:
        return np.asarray(transmit_power(zeta, params.power_control, role), dtype=float)
    pc = params.power_control
    with np.errstate(over="ignore"):
        return pc.rho_w(role) * zeta ** pc.epsilon(role)


@dataclass(frozen=True)
class SourcePowerModel:
    """Discretized serving-distance law with the induced transmit powers."""

    role: NodeRole
    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]
    density: dict[Condition, NDArray[np.float64]]
    power: dict[Condition, NDArray[np.float64]]
    p_max: float
    los: LosStepFunction = field(repr=False)
    expected_mass: float = 1.0

    def __post_init__(self) -> None:
        mass = self.mass
        if abs(mass - self.expected_mass) > _MASS_TOLERANCE:
            raise ValueError(
                f"{self.role} serving-distance law integrates to {mass:.8f}, "
                f"expected {self.expected_mass:.8f}"
            )

    @property
    def mass(self) -> float:
        return float(sum(np.dot(self.weights, d) for d in self.density.values()))

    def quadrature_weights(self, condition: Condition) -> NDArray[np.float64]:
        """w_q·f^ν(x_q), ready to contract against per-node values."""
        return self.weights * self.density[condition]

    def mean_power(self) -> float:
        return float(
            sum(np.dot(self.quadrature_weights(c), self.power[c]) for c in Condition)
        )

    def fraction_at_max_power(self) -> float:
        """Probability that power control saturates at P_max."""
        return float(
            sum(
                np.dot(self.quadrature_weights(c), self.power[c] >= self.p_max * (1 - 1e-12))
                for c in Condition
            )
        )

    def condition_probability(self, condition: Condition) -> float:
        return float(np.dot(self.weights, self.density[condition]))


def source_power_model(
    role: NodeRole, params: ScenarioParams, nodes_per_cell: int | None = None
) -> SourcePowerModel:
    """Discretize the serving-distance law of UAVs or GUEs."""
    order = nodes_per_cell or params.analytics.source_nodes_per_cell
    upper = serving_support(role, params)
    edges = grid_edges(upper, params.los_grid_spacing_m)
    nodes, weights = panel_rule(edges, order)

    expected_mass = 1.0
    if role is NodeRole.GUE:
        expected_mass = float(rayleigh_cdf(upper, sigma_g(params)))
        if expected_mass < 1.0 - _MASS_TOLERANCE:
            logger.warning(
                f"GUE serving distances cut at {upper:.1f} m keep only "
                f"{expected_mass:.6f} of the probability mass"
            )

    los = los_step_table(serving_link_type(role), params)
    pdf = serving_pdf(role, nodes, params)
    p_los = np.asarray(los(nodes))
    density = {Condition.LOS: p_los * pdf, Condition.NLOS: (1.0 - p_los) * pdf}
    power = {c: serving_power(role, c, nodes, params) for c in Condition}

    model = SourcePowerModel(
        role=role,
        nodes=nodes,
        weights=weights,
        density=density,
        power=power,
        p_max=params.power_control.p_max_w(role),
        los=los,
        expected_mass=expected_mass,
    )
    logger.debug(
        f"{role} power law: {nodes.size} nodes on [0, {upper:.1f}] m, "
        f"P(LoS) = {model.condition_probability(Condition.LOS):.4f}, "
        f"at P_max = {model.fraction_at_max_power():.3f}"
    )
    return model
