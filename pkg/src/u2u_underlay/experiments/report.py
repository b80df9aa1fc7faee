"""Analytic-vs-Monte Carlo comparison of coverage curves."""

import logging
from collections.abc import Iterable

import numpy as np

from ..errors import AcceptanceError
from ..storage.models import ComparisonSummary, CoverageCurve

logger = logging.getLogger(__name__)

ACCEPTANCE_BAND = 0.02


def compare_report(
    analytic: CoverageCurve,
    mc: CoverageCurve,
    *,
    band: float = ACCEPTANCE_BAND,
    label: str | None = None,
) -> ComparisonSummary:
    """Per-point deviation of an analytic curve from a Monte Carlo estimate.

    Raises:
        ValueError: If the two curves use different threshold grids
    """
    if analytic.threshold_db.shape != mc.threshold_db.shape or not np.allclose(
        analytic.threshold_db, mc.threshold_db, rtol=0.0, atol=1e-9
    ):
        raise ValueError(
            f"threshold grids differ: {analytic.threshold_db.tolist()} vs {mc.threshold_db.tolist()}"
        )
    assert mc.ci_low is not None and mc.ci_high is not None
    summary = ComparisonSummary(
        label=label or analytic.label,
        threshold_db=analytic.threshold_db,
        analytic=analytic.coverage,
        montecarlo=mc.coverage,
        ci_low=mc.ci_low,
        ci_high=mc.ci_high,
        band=band,
    )
    verdict = "PASS" if summary.passed else "FAIL"
    log = logger.info if summary.passed else logger.warning
    log(
        f"{summary.label}: max |analytic - MC| = {summary.max_abs_dev:.4f}, "
        f"mean {summary.mean_abs_dev:.4f}, inside CI {summary.frac_inside_ci:.0%} "
        f"-> {verdict} (band {band})"
    )
    return summary


def check_acceptance(summaries: Iterable[ComparisonSummary]) -> None:
    """Raise AcceptanceError listing every comparison outside its band."""
    failed = [s for s in summaries if not s.passed]
    if failed:
        details = ", ".join(f"{s.label} ({s.max_abs_dev:.4f} > {s.band})" for s in failed)
        raise AcceptanceError(f"{len(failed)} comparison(s) outside the acceptance band: {details}")
