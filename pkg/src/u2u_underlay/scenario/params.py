"""Validated parameter models for the UAV underlay system model.

Every model is frozen, so a loaded scenario can be shared freely between
worker processes. Quantities are stored in the units the scenario document
uses (km⁻², degrees, dBi, dBm); SI views are exposed as properties.
"""

import logging
import math
from enum import StrEnum
from typing import Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    field_validator,
    model_validator,
)

from ..utils.units import db_to_linear, dbm_to_watts, per_km2_to_per_m2

logger = logging.getLogger(__name__)

THERMAL_NOISE_DBM_PER_HZ = -174.0

# Default SINR grid: -10 dB to 30 dB in 2 dB steps
DEFAULT_THRESHOLDS_DB: tuple[float, ...] = tuple(float(t) for t in range(-10, 31, 2))


class LinkType(StrEnum):
    """Transmitter/receiver pairing of a link: x→y written as "xy"."""

    GB = "gb"  # GUE → BS
    UB = "ub"  # UAV → BS
    UU = "uu"  # UAV → UAV
    GU = "gu"  # GUE → UAV

    @property
    def touches_bs(self) -> bool:
        return self in (LinkType.GB, LinkType.UB)


class Condition(StrEnum):
    LOS = "L"
    NLOS = "N"


class NodeRole(StrEnum):
    GUE = "g"
    UAV = "u"


class Victim(StrEnum):
    """Typical receiver whose coverage is evaluated."""

    UAV = "u"
    BS = "b"


def _frozen() -> ConfigDict:
    return ConfigDict(frozen=True, extra="forbid")


class LinkClass(BaseModel):
    """Path-loss and fading constants of one link type under one condition."""

    model_config = _frozen()

    link_type: LinkType
    condition: Condition
    alpha: float = Field(gt=0, description="Path-loss exponent")
    tau_hat_db: float = Field(description="Reference path loss at the carrier")
    m_fading: int = Field(default=1, ge=1, description="Nakagami-m shape")

    @field_validator("tau_hat_db")
    @classmethod
    def _finite_tau(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("tau_hat_db must be finite")
        return value

    @property
    def tau_hat(self) -> float:
        """Reference path loss in linear scale."""
        return float(db_to_linear(self.tau_hat_db))

    @property
    def beta(self) -> float:
        return 2.0 / self.alpha

    @property
    def key(self) -> str:
        return f"{self.link_type}.{self.condition}"


class AntennaParams(BaseModel):
    """BS vertical uniform linear array."""

    model_config = _frozen()

    n_elements: int = Field(default=8, ge=1)
    downtilt_deg: float = Field(default=102.0, gt=0.0, lt=180.0)
    element_peak_gain_dbi: float = 8.0
    # Provenance only: the array factor assumes half-wavelength spacing
    element_spacing_wavelengths: float = Field(default=0.5, gt=0.0)

    @field_validator("element_peak_gain_dbi")
    @classmethod
    def _finite_gain(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("element_peak_gain_dbi must be finite")
        return value

    @property
    def downtilt_rad(self) -> float:
        return math.radians(self.downtilt_deg)

    @property
    def element_peak_gain(self) -> float:
        """Linear element peak gain g_E^max."""
        return float(db_to_linear(self.element_peak_gain_dbi))


class PowerControlParams(BaseModel):
    """Fractional power control constants for GUEs and UAVs."""

    model_config = _frozen()

    p_max_g_dbm: float = 24.0
    p_max_u_dbm: float = 24.0
    rho_g_dbm: float = -58.0
    rho_u_dbm: float = -58.0
    epsilon_g: float = 0.6
    epsilon_u: float = 0.6

    @field_validator("epsilon_g", "epsilon_u")
    @classmethod
    def _epsilon_range(cls, value: float) -> float:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"epsilon ∈ [0,1] violated: got {value}")
        return value

    def p_max_w(self, role: NodeRole) -> float:
        dbm = self.p_max_g_dbm if role is NodeRole.GUE else self.p_max_u_dbm
        return float(dbm_to_watts(dbm))

    def rho_w(self, role: NodeRole) -> float:
        dbm = self.rho_g_dbm if role is NodeRole.GUE else self.rho_u_dbm
        return float(dbm_to_watts(dbm))

    def epsilon(self, role: NodeRole) -> float:
        return self.epsilon_g if role is NodeRole.GUE else self.epsilon_u


class AnalyticsParams(BaseModel):
    """Numerical controls of the closed-form engine."""

    model_config = _frozen()

    # None follows simulation.disc_radius_m; math.inf closes the sums exactly
    interference_radius_m: float | None = Field(default=None, gt=0)
    far_field_radius_m: float = Field(default=100_000.0, gt=0)
    unclamped_serving_power: bool = False
    gain_subcells: int = Field(default=1, ge=1)
    gue_outer_sigmas: float = Field(default=8.0, gt=0)
    outer_epsabs: float = Field(default=1e-6, gt=0)
    source_nodes_per_cell: int = Field(default=16, ge=2)
    table_points_per_decade: int = Field(default=24, ge=4)
    table_log10_load_min: float = -4.0
    table_log10_load_max: float = 30.0
    method: Literal["table", "direct"] = "table"

    @model_validator(mode="after")
    def _table_range(self) -> "AnalyticsParams":
        if self.table_log10_load_max <= self.table_log10_load_min:
            raise ValueError("table_log10_load_max must exceed table_log10_load_min")
        return self


class SimulationParams(BaseModel):
    """Controls of the Monte Carlo engine."""

    model_config = _frozen()

    disc_radius_m: float = Field(default=10_000.0, gt=0)
    gue_mode: Literal["A", "B"] = "A"
    # Extra ring of BSs so GUEs near the disc edge still find their nearest BS
    bs_margin_m: float = Field(default=2_000.0, ge=0)
    batch_size: int = Field(default=500, ge=1)


LINK_OVERRIDE_FIELDS = ("alpha", "tau_hat_db", "m_fading")


def table_link_classes(
    carrier_freq_ghz: float, h_u: float
) -> dict[tuple[LinkType, Condition], LinkClass]:
    """Build the reference link-class table, height formulas resolved at h_u."""
    log_f = 20.0 * math.log10(carrier_freq_ghz)
    log_h = math.log10(h_u)
    uav_nlos_tau = -17.5 + 20.0 * math.log10(40.0 * math.pi * carrier_freq_ghz / 3.0)
    uav_nlos_alpha = 4.6 - 0.7 * log_h

    raw = {
        (LinkType.GB, Condition.LOS): (2.2, 28.0 + log_f),
        (LinkType.GB, Condition.NLOS): (3.9, 13.54 + log_f),
        (LinkType.UB, Condition.LOS): (2.2, 28.0 + log_f),
        (LinkType.UB, Condition.NLOS): (uav_nlos_alpha, uav_nlos_tau),
        (LinkType.GU, Condition.LOS): (2.225 - 0.05 * log_h, 30.9 + log_f),
        (LinkType.GU, Condition.NLOS): (4.32 - 0.76 * log_h, 32.4 + log_f),
        (LinkType.UU, Condition.LOS): (2.2, 28.0 + log_f),
        (LinkType.UU, Condition.NLOS): (uav_nlos_alpha, uav_nlos_tau),
    }
    return {
        key: LinkClass(link_type=key[0], condition=key[1], alpha=alpha, tau_hat_db=tau)
        for key, (alpha, tau) in raw.items()
    }


def parse_override_key(key: str) -> tuple[LinkType, Condition, str]:
    """Split an override key such as "uu.N.alpha" into its parts."""
    parts = key.split(".")
    if len(parts) != 3:
        raise ValueError(f"link override key must read <type>.<L|N>.<field>: {key!r}")
    link_raw, cond_raw, field = parts
    try:
        link_type = LinkType(link_raw)
        condition = Condition(cond_raw)
    except ValueError as e:
        raise ValueError(f"unknown link class in override {key!r}") from e
    if field not in LINK_OVERRIDE_FIELDS:
        raise ValueError(
            f"unknown link field {field!r} in {key!r}; expected one of {LINK_OVERRIDE_FIELDS}"
        )
    return link_type, condition, field


class ScenarioParams(BaseModel):
    """Complete parameterization of the system model.

    Defaults reproduce the reference urban deployment. Link classes are
    derived from the carrier frequency and UAV height at construction time,
    then patched by explicit ``link_overrides``.
    """

    model_config = _frozen()

    lambda_b_per_km2: float = Field(default=5.0, gt=0)
    lambda_u_per_km2: float = Field(default=1.0, ge=0)
    h_b: float = Field(default=25.0, gt=0)
    h_u: float = Field(default=100.0, gt=0)
    h_g: float = Field(default=1.5, gt=0)
    sigma_u: float = Field(default=100.0, gt=0)
    r_max: float = Field(default=1000.0, gt=0)
    carrier_freq_ghz: float = Field(default=2.0, gt=0)
    prb_bandwidth_hz: float = Field(default=180_000.0, gt=0)
    noise_figure_db: float = 7.0
    itu_a1: float = Field(default=0.3, gt=0)
    itu_a2: float = Field(default=500.0, gt=0)
    itu_a3: float = Field(default=20.0, gt=0)
    los_truncation_m: float | None = Field(default=None, gt=0)
    antenna: AntennaParams = AntennaParams()
    power_control: PowerControlParams = PowerControlParams()
    analytics: AnalyticsParams = AnalyticsParams()
    simulation: SimulationParams = SimulationParams()
    sinr_threshold_db: tuple[float, ...] = DEFAULT_THRESHOLDS_DB
    link_overrides: dict[str, float] = Field(default_factory=dict)

    _link_classes: dict[tuple[LinkType, Condition], LinkClass] = PrivateAttr(
        default_factory=dict
    )

    @field_validator("sinr_threshold_db")
    @classmethod
    def _threshold_grid(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value:
            raise ValueError("sinr_threshold_db grid must not be empty")
        if any(b <= a for a, b in zip(value, value[1:], strict=False)):
            raise ValueError("sinr_threshold_db grid must be strictly increasing")
        return value

    @model_validator(mode="after")
    def _build_link_classes(self) -> "ScenarioParams":
        table = table_link_classes(self.carrier_freq_ghz, self.h_u)
        patches: dict[tuple[LinkType, Condition], dict[str, float | int]] = {}
        for key, value in self.link_overrides.items():
            link_type, condition, field = parse_override_key(key)
            if field == "m_fading":
                if not float(value).is_integer() or value < 1:
                    raise ValueError(
                        f"m_fading must be a positive integer, got {value} for {key}"
                    )
                value = int(value)
            patches.setdefault((link_type, condition), {})[field] = value

        for class_key, patch in patches.items():
            base = table[class_key].model_dump()
            table[class_key] = LinkClass.model_validate({**base, **patch})

        missing = [k for k in _ALL_CLASS_KEYS if k not in table]
        if missing:
            raise ValueError(f"link class table incomplete, missing {missing}")
        self._link_classes = table
        return self

    # SI views

    @property
    def lambda_b(self) -> float:
        """BS density in nodes/m²."""
        return per_km2_to_per_m2(self.lambda_b_per_km2)

    @property
    def lambda_u(self) -> float:
        """U2U transmitter density in nodes/m²."""
        return per_km2_to_per_m2(self.lambda_u_per_km2)

    @property
    def los_grid_spacing_m(self) -> float:
        """Width of one LoS grid cell, 1000/√(a₁a₂)."""
        return 1000.0 / math.sqrt(self.itu_a1 * self.itu_a2)

    @property
    def los_truncation_radius_m(self) -> float:
        """LoS table extent, rounded up to a whole number of grid cells."""
        raw = self.los_truncation_m
        if raw is None:
            raw = 10.0 / math.sqrt(math.pi * self.lambda_b)
        spacing = self.los_grid_spacing_m
        return math.ceil(raw / spacing - 1e-9) * spacing

    @property
    def interference_radius_m(self) -> float:
        radius = self.analytics.interference_radius_m
        return self.simulation.disc_radius_m if radius is None else radius

    @property
    def link_classes(self) -> dict[tuple[LinkType, Condition], LinkClass]:
        return dict(self._link_classes)

    def link_class(self, link_type: LinkType, condition: Condition) -> LinkClass:
        """Resolve one link class; every pair is guaranteed present."""
        try:
            return self._link_classes[(LinkType(link_type), Condition(condition))]
        except KeyError as e:
            raise KeyError(f"no link class for {link_type}.{condition}") from e

    def link_heights(self, link_type: LinkType) -> tuple[float, float]:
        """Transmitter and receiver heights (h_x, h_y) of a link type."""
        return {
            LinkType.GB: (self.h_g, self.h_b),
            LinkType.UB: (self.h_u, self.h_b),
            LinkType.UU: (self.h_u, self.h_u),
            LinkType.GU: (self.h_g, self.h_u),
        }[LinkType(link_type)]

    def height_difference(self, link_type: LinkType) -> float:
        h_x, h_y = self.link_heights(link_type)
        return abs(h_x - h_y)

    def max_fading_parameter(self) -> int:
        return max(cls.m_fading for cls in self._link_classes.values())

    def with_overrides(self, **updates: object) -> "ScenarioParams":
        """Return a re-validated copy with top-level fields replaced.

        Nested models may be passed as dicts of partial updates, e.g.
        ``with_overrides(power_control={"epsilon_u": 0.9})``.
        """
        data = self.model_dump()
        for name, value in updates.items():
            if name not in type(self).model_fields:
                raise ValueError(f"unknown scenario field {name!r}")
            if isinstance(value, dict) and isinstance(data.get(name), dict):
                data[name] = {**data[name], **value}
            else:
                data[name] = value
        return type(self).model_validate(data)


_ALL_CLASS_KEYS = [(lt, c) for lt in LinkType for c in Condition]


def noise_power_dbm(params: ScenarioParams) -> float:
    """Thermal noise over one PRB: -174 dBm/Hz + 10·log₁₀(B) + NF."""
    return (
        THERMAL_NOISE_DBM_PER_HZ
        + 10.0 * math.log10(params.prb_bandwidth_hz)
        + params.noise_figure_db
    )


def noise_power_w(params: ScenarioParams) -> float:
    return float(dbm_to_watts(noise_power_dbm(params)))


def mean_u2u_distance(params: ScenarioParams) -> float:
    """Untruncated Rayleigh mean σ_u·√(π/2) of the U2U link distance.

    Logs a warning when r_M is not well above σ_u, since truncation then
    pulls the true mean below this value.
    """
    if params.r_max < 3.0 * params.sigma_u:
        logger.warning(
            f"r_max = {params.r_max:.1f} m is not >> sigma_u = {params.sigma_u:.1f} m; "
            "the truncated mean is smaller than the reported value"
        )
    return params.sigma_u * math.sqrt(math.pi / 2.0)


def sigma_g(params: ScenarioParams) -> float:
    """Rayleigh scale of the GUE serving distance, 1/√(2πλ_b)."""
    return 1.0 / math.sqrt(2.0 * math.pi * params.lambda_b)
