"""Result models emitted by the analytic and Monte Carlo engines."""

import math
from dataclasses import asdict, dataclass, field
from datetime import UTC as datetime_utc
from datetime import datetime
from typing import Any

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

ANALYTIC = "analytic"
MONTECARLO = "montecarlo"

MONTECARLO_CURVE_COLUMNS = [
    "threshold_db",
    "coverage",
    "ci_low",
    "ci_high",
    "ci_half_width",
    "n_records",
]
POWER_DECOMPOSITION_COLUMNS = [
    "epsilon_u",
    "victim",
    "useful_dbm",
    "i_gue_dbm",
    "i_uav_dbm",
    "frac_uav_at_pmax",
]
COMPARISON_COLUMNS = [
    "threshold_db",
    "analytic",
    "montecarlo",
    "abs_diff",
    "ci_low",
    "ci_high",
    "inside_ci",
]
SWEEP_COLUMNS = [
    "sweep_key",
    "sweep_value",
    "link",
    "engine",
    "threshold_db",
    "coverage",
    "ci_half_width",
]


def _as_array(values: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(values, dtype=float).reshape(-1)


@dataclass
class CoverageCurve:
    """One coverage curve P(SINR > T) over a threshold grid in dB.

    Analytic curves carry no confidence interval (``ci_low``/``ci_high`` equal
    the coverage and ``n_records`` is 0).
    """

    label: str
    engine: str
    threshold_db: NDArray[np.float64]
    coverage: NDArray[np.float64]
    ci_low: NDArray[np.float64] | None = None
    ci_high: NDArray[np.float64] | None = None
    n_records: int = 0
    created_at: datetime | None = None

    def __post_init__(self) -> None:
        self.threshold_db = _as_array(self.threshold_db)
        self.coverage = _as_array(self.coverage)
        if self.threshold_db.size == 0:
            raise ValueError("coverage curve needs at least one threshold")
        if self.coverage.shape != self.threshold_db.shape:
            raise ValueError(
                f"{self.label}: {self.coverage.size} coverage values for "
                f"{self.threshold_db.size} thresholds"
            )
        self.ci_low = self.coverage.copy() if self.ci_low is None else _as_array(self.ci_low)
        self.ci_high = self.coverage.copy() if self.ci_high is None else _as_array(self.ci_high)
        if self.created_at is None:
            self.created_at = datetime.now(datetime_utc)

    @property
    def ci_half_width(self) -> NDArray[np.float64]:
        assert self.ci_low is not None and self.ci_high is not None
        return (self.ci_high - self.ci_low) / 2.0

    def at(self, threshold_db: float) -> float:
        """Coverage at a grid threshold (no interpolation)."""
        matches = np.flatnonzero(np.isclose(self.threshold_db, threshold_db, atol=1e-9))
        if matches.size == 0:
            raise KeyError(f"{self.label}: threshold {threshold_db} dB is not on the grid")
        return float(self.coverage[matches[0]])

    def median_threshold_db(self) -> float:
        """Threshold where coverage crosses 0.5, linearly interpolated; NaN if never."""
        above = self.coverage >= 0.5
        if not above.any() or above.all():
            return math.nan
        i = int(np.flatnonzero(above)[-1])
        if i + 1 >= self.coverage.size:
            return math.nan
        c0, c1 = self.coverage[i], self.coverage[i + 1]
        t0, t1 = self.threshold_db[i], self.threshold_db[i + 1]
        if c0 == c1:
            return float(t0)
        return float(t0 + (c0 - 0.5) * (t1 - t0) / (c0 - c1))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "threshold_db": self.threshold_db,
                "coverage": self.coverage,
                "ci_low": self.ci_low,
                "ci_high": self.ci_high,
                "ci_half_width": self.ci_half_width,
                "n_records": self.n_records,
            },
            columns=MONTECARLO_CURVE_COLUMNS,
        )

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, label: str, engine: str) -> "CoverageCurve":
        """Rebuild a curve from either CSV schema."""
        has_ci = "ci_low" in frame.columns
        return cls(
            label=label,
            engine=engine,
            threshold_db=frame["threshold_db"].to_numpy(),
            coverage=frame["coverage"].to_numpy(),
            ci_low=frame["ci_low"].to_numpy() if has_ci else None,
            ci_high=frame["ci_high"].to_numpy() if has_ci else None,
            n_records=int(frame["n_records"].iloc[0]) if "n_records" in frame.columns else 0,
        )


@dataclass
class PowerDecompositionRow:
    """Mean SINR components at one victim for one ε_u value (dBm, −inf if absent)."""

    epsilon_u: float
    victim: str
    useful_dbm: float
    i_gue_dbm: float
    i_uav_dbm: float
    frac_uav_at_pmax: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class PowerDecomposition:
    """Mean received signal and per-source interference over an ε_u sweep."""

    rows: list[PowerDecompositionRow] = field(default_factory=list)

    def add(self, row: PowerDecompositionRow) -> None:
        self.rows.append(row)

    def for_victim(self, victim: str) -> list[PowerDecompositionRow]:
        return sorted((r for r in self.rows if r.victim == victim), key=lambda r: r.epsilon_u)

    def crossover_epsilon(self, victim: str) -> float:
        """First ε_u where UAV interference overtakes GUE interference (linear interp in dB)."""
        rows = self.for_victim(victim)
        diffs = [r.i_uav_dbm - r.i_gue_dbm for r in rows]
        for i in range(len(rows) - 1):
            d0, d1 = diffs[i], diffs[i + 1]
            if math.isfinite(d0) and math.isfinite(d1) and d0 < 0 <= d1:
                e0, e1 = rows[i].epsilon_u, rows[i + 1].epsilon_u
                return e0 - d0 * (e1 - e0) / (d1 - d0)
        return math.nan

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.rows], columns=POWER_DECOMPOSITION_COLUMNS)


@dataclass
class ComparisonSummary:
    """Analytic-vs-Monte Carlo agreement of one curve pair."""

    label: str
    threshold_db: NDArray[np.float64]
    analytic: NDArray[np.float64]
    montecarlo: NDArray[np.float64]
    ci_low: NDArray[np.float64]
    ci_high: NDArray[np.float64]
    band: float

    @property
    def abs_diff(self) -> NDArray[np.float64]:
        return np.abs(self.analytic - self.montecarlo)

    @property
    def inside_ci(self) -> NDArray[np.bool_]:
        return (self.analytic >= self.ci_low) & (self.analytic <= self.ci_high)

    @property
    def max_abs_dev(self) -> float:
        return float(self.abs_diff.max())

    @property
    def mean_abs_dev(self) -> float:
        return float(self.abs_diff.mean())

    @property
    def frac_inside_ci(self) -> float:
        return float(self.inside_ci.mean())

    @property
    def passed(self) -> bool:
        return self.max_abs_dev <= self.band

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "threshold_db": self.threshold_db,
                "analytic": self.analytic,
                "montecarlo": self.montecarlo,
                "abs_diff": self.abs_diff,
                "ci_low": self.ci_low,
                "ci_high": self.ci_high,
                "inside_ci": self.inside_ci,
            },
            columns=COMPARISON_COLUMNS,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "max_abs_dev": self.max_abs_dev,
            "mean_abs_dev": self.mean_abs_dev,
            "frac_inside_ci": self.frac_inside_ci,
            "band": self.band,
            "passed": self.passed,
        }
