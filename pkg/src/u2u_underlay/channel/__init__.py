"""Per-link physical models: LoS, path loss, antenna gain, fading, power control."""

from .antenna import array_factor, bs_antenna_gain, element_gain
from .geometry import LinkGeometry, zenith_angle_at_bs
from .los import LosStepFunction, building_index_bound, los_probability, los_step_table
from .propagation import (
    fading_cdf,
    large_scale_fading,
    link_gain,
    path_loss,
    sample_fading,
    transmit_power,
)

__all__ = [
    "LinkGeometry",
    "LosStepFunction",
    "array_factor",
    "bs_antenna_gain",
    "building_index_bound",
    "element_gain",
    "fading_cdf",
    "large_scale_fading",
    "link_gain",
    "los_probability",
    "los_step_table",
    "path_loss",
    "sample_fading",
    "transmit_power",
    "zenith_angle_at_bs",
]
