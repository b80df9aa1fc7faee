"""Result models and the on-disk result store."""

from .models import (
    ANALYTIC,
    COMPARISON_COLUMNS,
    MONTECARLO,
    MONTECARLO_CURVE_COLUMNS,
    POWER_DECOMPOSITION_COLUMNS,
    SWEEP_COLUMNS,
    ComparisonSummary,
    CoverageCurve,
    PowerDecomposition,
    PowerDecompositionRow,
)
from .store import MANIFEST_NAME, ResultStore

__all__ = [
    "ANALYTIC",
    "COMPARISON_COLUMNS",
    "MANIFEST_NAME",
    "MONTECARLO",
    "MONTECARLO_CURVE_COLUMNS",
    "POWER_DECOMPOSITION_COLUMNS",
    "SWEEP_COLUMNS",
    "ComparisonSummary",
    "CoverageCurve",
    "PowerDecomposition",
    "PowerDecompositionRow",
    "ResultStore",
]
