"""Named experiments, their runner and the command-line interface."""

from .report import ACCEPTANCE_BAND, check_acceptance, compare_report
from .runner import (
    ExperimentRunner,
    ExperimentSummary,
    TaskResult,
    rerun_experiment,
    run_experiment,
)
from .spec import ExperimentSpec, apply_setting, is_sweepable, point_tag

__all__ = [
    "ACCEPTANCE_BAND",
    "ExperimentRunner",
    "ExperimentSpec",
    "ExperimentSummary",
    "TaskResult",
    "apply_setting",
    "check_acceptance",
    "compare_report",
    "is_sweepable",
    "point_tag",
    "rerun_experiment",
    "run_experiment",
]
