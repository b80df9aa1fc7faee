"""Statistics over Monte Carlo SINR records."""

import logging
import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import binomtest

from ..errors import InsufficientRecordsError
from ..scenario.params import NodeRole, ScenarioParams, Victim
from ..storage.models import MONTECARLO, CoverageCurve, PowerDecompositionRow
from ..utils.units import db_to_linear, watts_to_dbm
from .sinr import RecordSet, SinrRecord

logger = logging.getLogger(__name__)

MIN_RECORDS = 100
CONFIDENCE = 0.95


def _as_record_set(records: RecordSet | Sequence[SinrRecord]) -> RecordSet:
    if isinstance(records, RecordSet):
        return records
    return RecordSet.from_records(list(records))


def _require(records: RecordSet, what: str) -> None:
    if len(records) < MIN_RECORDS:
        raise InsufficientRecordsError(
            f"{what} needs at least {MIN_RECORDS} records, got {len(records)}"
        )


def estimate_ccdf(
    records: RecordSet | Sequence[SinrRecord],
    thresholds_db: ArrayLike,
    *,
    label: str | None = None,
    confidence: float = CONFIDENCE,
) -> CoverageCurve:
    """Empirical P(SINR > T) with Wilson-score confidence intervals.

    Args:
        records: Records of a single victim type
        thresholds_db: Threshold grid in dB
        label: Curve label, defaults to the victim
        confidence: Two-sided confidence level of the intervals

    Raises:
        InsufficientRecordsError: Fewer than 100 records
        ValueError: Records of more than one victim type
    """
    rs = _as_record_set(records)
    _require(rs, "a CCDF estimate")
    if len(rs.victims) > 1:
        raise ValueError(f"records mix victim types {sorted(rs.victims)}")

    thresholds = np.asarray(thresholds_db, dtype=float).reshape(-1)
    t_lin = np.asarray(db_to_linear(thresholds), dtype=float).reshape(-1)
    sinr = rs.sinr
    n = len(rs)

    coverage = np.empty(thresholds.size)
    ci_low = np.empty(thresholds.size)
    ci_high = np.empty(thresholds.size)
    for i, t in enumerate(t_lin):
        k = int(np.count_nonzero(sinr > t))
        interval = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
        coverage[i] = k / n
        ci_low[i], ci_high[i] = interval.low, interval.high

    logger.debug(f"CCDF over {n} records at {thresholds.size} thresholds")
    return CoverageCurve(
        label=label or next(iter(rs.victims)),
        engine=MONTECARLO,
        threshold_db=thresholds,
        coverage=coverage,
        ci_low=ci_low,
        ci_high=ci_high,
        n_records=n,
    )


def _mean_dbm(values: np.ndarray) -> float:
    mean = float(np.mean(values))
    return -math.inf if mean <= 0 else float(watts_to_dbm(mean))


def power_decomposition(
    records: RecordSet | Sequence[SinrRecord], params: ScenarioParams
) -> list[PowerDecompositionRow]:
    """Mean useful power and per-source interference (dBm) for each victim present.

    ``frac_uav_at_pmax`` is the share of typical U2U transmitters whose power
    control saturated at P_max; it is taken from the UAV-victim records.
    """
    rs = _as_record_set(records)
    _require(rs, "a power decomposition")

    p_max = params.power_control.p_max_w(NodeRole.UAV)
    uav = rs.for_victim(Victim.UAV)
    frac = (
        float(np.mean(uav.tx_power_w >= p_max * (1.0 - 1e-9))) if len(uav) else math.nan
    )

    rows = []
    for victim in (Victim.UAV, Victim.BS):
        sub = rs.for_victim(victim)
        if len(sub) == 0:
            continue
        rows.append(
            PowerDecompositionRow(
                epsilon_u=params.power_control.epsilon_u,
                victim=str(victim),
                useful_dbm=_mean_dbm(sub.useful_w),
                i_gue_dbm=_mean_dbm(sub.i_gue_w),
                i_uav_dbm=_mean_dbm(sub.i_uav_w),
                frac_uav_at_pmax=frac,
            )
        )
    return rows
