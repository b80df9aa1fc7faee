"""Closed-form coverage engine."""

from .coverage import CoverageResult, coverage_gue, coverage_u2u
from .distances import (
    rayleigh_cdf,
    rayleigh_pdf,
    sample_rayleigh,
    sample_truncated_rayleigh,
    truncated_rayleigh_cdf,
    truncated_rayleigh_pdf,
)
from .interference import (
    BsGainProfile,
    CellGrid,
    FootprintTable,
    InterferenceSpec,
    gue_to_bs_spec,
    gue_to_uav_spec,
    interference_integral,
    interference_specs,
    step_sum,
    step_sum_telescoped,
    uav_to_bs_spec,
    uav_to_uav_spec,
)
from .laplacian import (
    MAX_DERIVATIVE_ORDER,
    DerivativeEstimate,
    InterferenceField,
    laplacian_derivatives,
    laplacian_gue,
    laplacian_u2u,
)
from .sources import SourcePowerModel, source_power_model

__all__ = [
    "MAX_DERIVATIVE_ORDER",
    "BsGainProfile",
    "CellGrid",
    "CoverageResult",
    "DerivativeEstimate",
    "FootprintTable",
    "InterferenceField",
    "InterferenceSpec",
    "SourcePowerModel",
    "coverage_gue",
    "coverage_u2u",
    "gue_to_bs_spec",
    "gue_to_uav_spec",
    "interference_integral",
    "interference_specs",
    "laplacian_derivatives",
    "laplacian_gue",
    "laplacian_u2u",
    "rayleigh_cdf",
    "rayleigh_pdf",
    "sample_rayleigh",
    "sample_truncated_rayleigh",
    "source_power_model",
    "step_sum",
    "step_sum_telescoped",
    "truncated_rayleigh_cdf",
    "truncated_rayleigh_pdf",
    "uav_to_bs_spec",
    "uav_to_uav_spec",
]
