"""Monte Carlo ground truth for the coverage analytics."""

from .engine import MonteCarloEngine, mode_comparison, simulate_batch, simulate_drops
from .estimators import MIN_RECORDS, estimate_ccdf, power_decomposition
from .realization import (
    LinkSet,
    NetworkRealization,
    ServingLink,
    check_disc_radius,
    drop_realization,
    drop_rng,
    los_tables,
    one_gue_per_cell,
    sample_ppp_disc,
)
from .sinr import RecordSet, SinrRecord, sinr_gue_ul, sinr_u2u

__all__ = [
    "MIN_RECORDS",
    "LinkSet",
    "MonteCarloEngine",
    "NetworkRealization",
    "RecordSet",
    "ServingLink",
    "SinrRecord",
    "check_disc_radius",
    "drop_realization",
    "drop_rng",
    "estimate_ccdf",
    "los_tables",
    "mode_comparison",
    "one_gue_per_cell",
    "power_decomposition",
    "sample_ppp_disc",
    "simulate_batch",
    "simulate_drops",
    "sinr_gue_ul",
    "sinr_u2u",
]
