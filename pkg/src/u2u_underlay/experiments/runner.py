"""Experiment execution: sweeps, engines, artifacts and the manifest.

Analytic sweep points are independent tasks and run on a process pool of
``jobs`` workers. Monte Carlo points run one after another, each spreading
its drops over the same number of workers.
"""

import logging
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import UTC as datetime_utc
from datetime import datetime
from pathlib import Path
from typing import Any, Generic, TypeVar

import numpy as np
import pandas as pd
import scipy

from .. import __version__
from ..analytics.coverage import CoverageResult, coverage_gue, coverage_u2u
from ..scenario.loader import load_scenario, scenario_to_document, serialize_scenario
from ..scenario.params import ScenarioParams, Victim
from ..simulation.engine import MonteCarloEngine
from ..simulation.estimators import estimate_ccdf, power_decomposition
from ..simulation.sinr import RecordSet
from ..storage.models import (
    ANALYTIC,
    MONTECARLO,
    SWEEP_COLUMNS,
    ComparisonSummary,
    CoverageCurve,
    PowerDecomposition,
)
from ..storage.store import ResultStore
from .report import check_acceptance, compare_report
from .spec import (
    TRADEOFF_SIGMAS,
    TRADEOFF_THRESHOLD_DB,
    ExperimentSpec,
    apply_setting,
    point_tag,
)

logger = logging.getLogger(__name__)

TOOL_NAME = "u2u-coverage"
LINKS = {"u2u": Victim.UAV, "gue": Victim.BS}

T = TypeVar("T")


@dataclass
class TaskResult(Generic[T]):
    """Result of one sweep-point task."""

    task_name: str
    success: bool
    data: T | None = None
    error: str | None = None
    execution_time: float = 0.0
    items_processed: int = 0
    exception: BaseException | None = None


@dataclass
class AnalyticTask:
    """One analytic coverage curve to compute."""

    name: str
    params: ScenarioParams
    link: str
    thresholds_db: tuple[float, ...]


def run_analytic_task(task: AnalyticTask) -> TaskResult[CoverageResult]:
    """Compute one analytic curve; failures are captured, not raised."""
    start_time = time.time()
    try:
        compute = coverage_u2u if task.link == "u2u" else coverage_gue
        result = compute(task.params, task.thresholds_db)
        return TaskResult(
            task_name=task.name,
            success=True,
            data=result,
            execution_time=time.time() - start_time,
            items_processed=len(task.thresholds_db),
        )
    except Exception as e:
        logger.error(f"❌ {task.name} failed: {e}")
        return TaskResult(
            task_name=task.name,
            success=False,
            error=str(e),
            execution_time=time.time() - start_time,
            exception=e,
        )


@dataclass
class ExperimentSummary:
    """What a run produced."""

    spec: ExperimentSpec
    out_dir: Path
    files: list[str] = field(default_factory=list)
    comparisons: list[ComparisonSummary] = field(default_factory=list)
    wall_clock_s: float = 0.0
    manifest_path: Path | None = None

    @property
    def passed(self) -> bool | None:
        if not self.comparisons:
            return None
        return all(c.passed for c in self.comparisons)


class ExperimentRunner:
    """Runs one ExperimentSpec against one scenario."""

    def __init__(self, spec: ExperimentSpec, params: ScenarioParams):
        self.spec = spec
        self.params = params
        self.store = ResultStore(spec.out_dir)
        self.comparisons: list[ComparisonSummary] = []

    # Engines

    def _analytic(self, tasks: list[AnalyticTask]) -> dict[str, CoverageResult]:
        logger.info(f"📐 {len(tasks)} analytic curve(s), jobs {self.spec.jobs}")
        if self.spec.jobs == 1 or len(tasks) == 1:
            results = [run_analytic_task(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=self.spec.jobs) as executor:
                results = list(executor.map(run_analytic_task, tasks))

        curves: dict[str, CoverageResult] = {}
        for result in results:
            if not result.success or result.data is None:
                exc = result.exception or RuntimeError(result.error or "unknown failure")
                exc.add_note(f"in experiment {self.spec.name}, task {result.task_name}")
                raise exc
            logger.info(f"   ✅ {result.task_name} in {result.execution_time:.1f}s")
            curves[result.task_name] = result.data
        return curves

    def _simulate(self, params: ScenarioParams, tag: str) -> RecordSet:
        logger.info(f"🎲 Monte Carlo point {tag}")
        engine = MonteCarloEngine(
            params, seed=self.spec.seed, jobs=self.spec.jobs, progress=self.spec.progress
        )
        records = engine.run(self.spec.drops)
        if self.spec.dump_records:
            self.store.write_frame(f"records_{tag}", records.to_frame())
        return records

    def _emit(
        self,
        name: str,
        analytic: CoverageResult | None,
        mc: CoverageCurve | None,
    ) -> None:
        if analytic is not None:
            self.store.write_frame(f"{name}_{ANALYTIC}", analytic.to_frame())
        if mc is not None:
            self.store.write_frame(f"{name}_{MONTECARLO}", mc.to_frame())
        if analytic is not None and mc is not None:
            summary = compare_report(analytic.to_curve(name), mc, band=self.spec.band, label=name)
            self.comparisons.append(summary)
            self.store.write_frame(f"{name}_comparison", summary.to_frame())

    # Experiments

    def _curve_experiment(self, with_baseline: bool) -> None:
        """Full coverage curves of both links at every sweep point."""
        spec = self.spec
        assert spec.sweep_key is not None
        thresholds = self.params.sinr_threshold_db
        points = []
        for value in spec.sweep_values:
            params = apply_setting(self.params, spec.sweep_key, value)
            curves = {f"{link}_{point_tag(spec.sweep_key, value)}": (params, link) for link in LINKS}
            if with_baseline:
                baseline = params.with_overrides(lambda_u_per_km2=0.0)
                curves[f"gue_baseline_{point_tag(spec.sweep_key, value)}"] = (baseline, "gue")
            points.append(curves)

        analytic: dict[str, CoverageResult] = {}
        if spec.uses_analytic:
            tasks = [
                AnalyticTask(name, params, link, thresholds)
                for curves in points
                for name, (params, link) in curves.items()
            ]
            analytic = self._analytic(tasks)

        mc: dict[str, CoverageCurve] = {}
        if spec.uses_montecarlo:
            for curves in points:
                by_params: dict[int, tuple[ScenarioParams, RecordSet]] = {}
                for name, (params, link) in curves.items():
                    key = id(params)
                    if key not in by_params:
                        by_params[key] = (params, self._simulate(params, name))
                    records = by_params[key][1].for_victim(LINKS[link])
                    mc[name] = estimate_ccdf(records, thresholds, label=name)

        for curves in points:
            for name in curves:
                self._emit(name, analytic.get(name), mc.get(name))
        if with_baseline:
            self._log_median_degradation(points, mc or {k: v.to_curve(k) for k, v in analytic.items()})

    def _log_median_degradation(
        self, points: list[dict[str, Any]], curves: dict[str, CoverageCurve]
    ) -> None:
        for point in points:
            gue = next((n for n in point if n.startswith("gue_") and "baseline" not in n), None)
            base = next((n for n in point if n.startswith("gue_baseline_")), None)
            if gue in curves and base in curves:
                drop_db = curves[base].median_threshold_db() - curves[gue].median_threshold_db()
                logger.info(f"📉 {gue}: median SINR degradation vs baseline {drop_db:.2f} dB")

    def _power_decomposition(self) -> None:
        spec = self.spec
        assert spec.sweep_key is not None
        decomposition = PowerDecomposition()
        for value in spec.sweep_values:
            params = apply_setting(self.params, spec.sweep_key, value)
            records = self._simulate(params, f"power_{point_tag(spec.sweep_key, value)}")
            for row in power_decomposition(records, params):
                decomposition.add(row)
        self.store.write_frame("power_decomposition", decomposition.to_frame())
        for victim in LINKS.values():
            crossing = decomposition.crossover_epsilon(str(victim))
            logger.info(f"🔀 victim {victim}: UAV interference overtakes GUE at ε_u ≈ {crossing:.2f}")

    def _threshold_sweep(self, params: ScenarioParams, name: str, threshold_db: float) -> None:
        """Coverage of both links at one threshold along the sweep."""
        spec = self.spec
        assert spec.sweep_key is not None
        grid = (threshold_db,)
        points = [(v, apply_setting(params, spec.sweep_key, v)) for v in spec.sweep_values]

        analytic: dict[str, CoverageResult] = {}
        if spec.uses_analytic:
            tasks = [
                AnalyticTask(f"{link}_{point_tag(spec.sweep_key, v)}", p, link, grid)
                for v, p in points
                for link in LINKS
            ]
            analytic = self._analytic(tasks)

        rows = []
        comparisons = []
        for value, p in points:
            records = (
                self._simulate(p, f"{name}_{point_tag(spec.sweep_key, value)}")
                if spec.uses_montecarlo
                else None
            )
            for link, victim in LINKS.items():
                point_name = f"{link}_{point_tag(spec.sweep_key, value)}"
                result = analytic.get(point_name)
                if result is not None:
                    rows.append(
                        [spec.sweep_key, value, link, ANALYTIC, threshold_db, result.coverage[0], 0.0]
                    )
                if records is not None:
                    curve = estimate_ccdf(records.for_victim(victim), grid, label=point_name)
                    rows.append(
                        [
                            spec.sweep_key,
                            value,
                            link,
                            MONTECARLO,
                            threshold_db,
                            curve.coverage[0],
                            curve.ci_half_width[0],
                        ]
                    )
                    if result is not None:
                        summary = compare_report(
                            result.to_curve(point_name),
                            curve,
                            band=spec.band,
                            label=f"{name}_{point_name}",
                        )
                        self.comparisons.append(summary)
                        frame = summary.to_frame()
                        frame.insert(0, "link", link)
                        frame.insert(0, "sweep_value", value)
                        comparisons.append(frame)

        self.store.write_frame(name, pd.DataFrame(rows, columns=SWEEP_COLUMNS))
        if comparisons:
            self.store.write_frame(f"{name}_comparison", pd.concat(comparisons, ignore_index=True))

    def _epsilon_tradeoff(self) -> None:
        threshold = (
            TRADEOFF_THRESHOLD_DB if self.spec.threshold_db is None else self.spec.threshold_db
        )
        for sigma in TRADEOFF_SIGMAS:
            params = apply_setting(self.params, "uav.sigma_u_m", sigma)
            self._threshold_sweep(params, f"epsilon_tradeoff_sigma_u{sigma:g}", threshold)

    def _custom_sweep(self) -> None:
        self._curve_experiment(with_baseline=False)
        if self.spec.threshold_db is not None:
            self._threshold_sweep(self.params, "custom_sweep", self.spec.threshold_db)

    # Entry point

    def run(self) -> ExperimentSummary:
        spec = self.spec
        started_at = datetime.now(datetime_utc)
        start_time = time.time()
        logger.info(
            f"🚀 Experiment {spec.name} (engine {spec.engine}, sweep {spec.sweep_key} = "
            f"{list(spec.sweep_values)}) -> {self.store.out_dir}"
        )

        {
            "ccdf_by_height": lambda: self._curve_experiment(with_baseline=True),
            "power_decomposition": self._power_decomposition,
            "epsilon_tradeoff": self._epsilon_tradeoff,
            "custom_sweep": self._custom_sweep,
        }[spec.name]()

        wall_clock = time.time() - start_time
        summary = ExperimentSummary(
            spec=spec,
            out_dir=self.store.out_dir,
            files=list(self.store.files),
            comparisons=self.comparisons,
            wall_clock_s=wall_clock,
        )
        summary.manifest_path = self.store.write_manifest(
            build_manifest(spec, self.params, summary, started_at)
        )
        logger.info(f"✅ Experiment {spec.name} finished in {wall_clock:.1f}s")

        if spec.check:
            check_acceptance(self.comparisons)
        return summary


def build_manifest(
    spec: ExperimentSpec,
    params: ScenarioParams,
    summary: ExperimentSummary,
    started_at: datetime,
) -> dict[str, Any]:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
        },
        "experiment": spec.model_dump(mode="json"),
        "scenario_document": serialize_scenario(params),
        "resolved_parameters": scenario_to_document(params),
        "link_table": {
            cls.key: {"alpha": cls.alpha, "tau_hat_db": cls.tau_hat_db, "m_fading": cls.m_fading}
            for cls in params.link_classes.values()
        },
        "seed": spec.seed,
        "started_at": started_at.isoformat(),
        "wall_clock_s": summary.wall_clock_s,
        "files": summary.files,
        "comparisons": [c.to_dict() for c in summary.comparisons],
        "passed": summary.passed,
    }


def run_experiment(spec: ExperimentSpec, params: ScenarioParams) -> ExperimentSummary:
    """Run an experiment and write its artifacts.

    Raises:
        AcceptanceError: In check mode, when a comparison leaves the band
    """
    return ExperimentRunner(spec, params).run()


def rerun_experiment(
    manifest_path: str | Path,
    *,
    out_dir: str | Path | None = None,
    jobs: int | None = None,
) -> ExperimentSummary:
    """Replay an experiment from its manifest (same spec, scenario and seed)."""
    manifest = ResultStore.load_manifest(manifest_path)
    experiment = dict(manifest["experiment"])
    if out_dir is not None:
        experiment["out_dir"] = str(out_dir)
    if jobs is not None:
        experiment["jobs"] = jobs
    spec = ExperimentSpec.model_validate(experiment)
    params = load_scenario(stream=manifest["scenario_document"])
    logger.info(f"🔁 Replaying {spec.name} from {manifest_path}")
    return run_experiment(spec, params)
