"""Scenario configuration: parameter models, defaults and the document format."""

from .loader import (
    document_keys,
    format_value,
    load_scenario,
    parse_set_overrides,
    scenario_to_document,
    serialize_scenario,
)
from .params import (
    AnalyticsParams,
    AntennaParams,
    Condition,
    LinkClass,
    LinkType,
    NodeRole,
    PowerControlParams,
    ScenarioParams,
    SimulationParams,
    Victim,
    mean_u2u_distance,
    noise_power_dbm,
    noise_power_w,
    sigma_g,
)

__all__ = [
    "AnalyticsParams",
    "AntennaParams",
    "Condition",
    "LinkClass",
    "LinkType",
    "NodeRole",
    "PowerControlParams",
    "ScenarioParams",
    "SimulationParams",
    "Victim",
    "document_keys",
    "format_value",
    "load_scenario",
    "mean_u2u_distance",
    "noise_power_dbm",
    "noise_power_w",
    "parse_set_overrides",
    "scenario_to_document",
    "serialize_scenario",
    "sigma_g",
]
