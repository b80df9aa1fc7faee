"""Command-line entry point: ``u2u-coverage run|rerun|los-table``."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from dotenv import load_dotenv
from pydantic import ValidationError

from ..channel.los import los_step_table
from ..errors import AcceptanceError, NumericalError, ScenarioError
from ..scenario.loader import load_scenario, parse_set_overrides
from ..scenario.params import LinkType
from ..utils.logging_config import setup_logging
from .runner import rerun_experiment, run_experiment
from .spec import ExperimentSpec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4

EXPERIMENTS = ("ccdf_by_height", "power_decomposition", "epsilon_tradeoff", "custom_sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="u2u-coverage",
        description="Coverage of UAV-to-UAV links underlaying a cellular uplink",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s run ccdf_by_height
      Analytic coverage curves at the default UAV heights (50 m, 150 m)

  %(prog)s run ccdf_by_height --engine both --drops 100000 --jobs 8 --check
      Analytic and Monte Carlo curves, fail with exit code 4 outside the 0.02 band

  %(prog)s run power_decomposition --engine mc --set deployment.lambda_u_per_km2=2
      Mean useful/interference powers along the epsilon_u grid

  %(prog)s run custom_sweep --sweep-key uav.sigma_u_m --sweep-values 50 100 150 --threshold-db 0
      Sweep any scalar scenario key

  %(prog)s rerun results/manifest.json --out replay
      Reproduce a previous run from its manifest

  %(prog)s los-table gu --out gu_los.csv
      Dump the LoS step table of the GUE-to-UAV link
        """.strip(),
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: $LOG_LEVEL or INFO)")
    parser.add_argument("--log-file", default=None, help="Also write logs to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run an experiment")
    run.add_argument("experiment", choices=EXPERIMENTS)
    _add_scenario_arguments(run)
    run.add_argument(
        "--engine",
        choices=["analytic", "mc", "montecarlo", "both"],
        default="analytic",
        help="Coverage engine (default: analytic)",
    )
    run.add_argument("--sweep-key", default=None, help="Scenario key to sweep")
    run.add_argument("--sweep-values", type=float, nargs="+", default=None, help="Sweep grid")
    run.add_argument(
        "--threshold-db",
        type=float,
        default=None,
        help="Single SINR threshold for sweep tables (epsilon_tradeoff default: -5)",
    )
    run.add_argument("--seed", type=int, default=0, help="Monte Carlo master seed")
    run.add_argument("--drops", type=int, default=10_000, help="Monte Carlo network drops per point")
    run.add_argument("--jobs", type=int, default=1, help="Worker processes")
    run.add_argument("--out", type=Path, default=Path("results"), help="Output directory")
    run.add_argument("--check", action="store_true", help="Fail if analytic and MC disagree")
    run.add_argument("--band", type=float, default=0.02, help="Acceptance band for --check")
    run.add_argument("--dump-records", action="store_true", help="Write raw SINR records")
    run.add_argument(
        "--unclamped-serving-power",
        action="store_true",
        help="Evaluate the serving GUE power without the P_max clamp",
    )
    run.add_argument("--no-progress", action="store_true", help="Hide progress bars")

    rerun = sub.add_parser("rerun", help="Reproduce an experiment from its manifest")
    rerun.add_argument("manifest", type=Path, help="manifest.json or a result directory")
    rerun.add_argument("--out", type=Path, default=None, help="Output directory (default: original)")
    rerun.add_argument("--jobs", type=int, default=None, help="Worker processes")

    los = sub.add_parser("los-table", help="Dump a link type's LoS step table to CSV")
    los.add_argument("link_type", choices=[t.value for t in LinkType])
    _add_scenario_arguments(los)
    los.add_argument("--out", type=Path, default=None, help="CSV path (default: <link>_los.csv)")
    return parser


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", type=Path, default=None, help="Scenario document")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a scenario key (repeatable, last wins)",
    )


def _command_run(args: argparse.Namespace) -> None:
    overrides = parse_set_overrides(args.overrides)
    if args.unclamped_serving_power:
        overrides["analytics.unclamped_serving_power"] = "true"
    params = load_scenario(args.scenario, overrides)
    spec = ExperimentSpec(
        name=args.experiment,
        engine=args.engine,
        sweep_key=args.sweep_key,
        sweep_values=tuple(args.sweep_values or ()),
        threshold_db=args.threshold_db,
        out_dir=args.out,
        seed=args.seed,
        drops=args.drops,
        jobs=args.jobs,
        check=args.check,
        band=args.band,
        dump_records=args.dump_records,
        progress=not args.no_progress,
    )
    summary = run_experiment(spec, params)
    print(f"✅ {len(summary.files)} file(s) written to {summary.out_dir}")


def _command_rerun(args: argparse.Namespace) -> None:
    summary = rerun_experiment(args.manifest, out_dir=args.out, jobs=args.jobs)
    print(f"✅ Replayed {summary.spec.name} into {summary.out_dir}")


def _command_los_table(args: argparse.Namespace) -> None:
    params = load_scenario(args.scenario, parse_set_overrides(args.overrides))
    table = los_step_table(LinkType(args.link_type), params)
    path = table.to_csv(args.out or Path(f"{args.link_type}_los.csv"))
    print(f"✅ {table.values.size} cells written to {path}")


COMMANDS = {"run": _command_run, "rerun": _command_rerun, "los-table": _command_los_table}


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the command and map failures to exit codes."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_file)

    try:
        COMMANDS[args.command](args)
    except AcceptanceError as e:
        logger.error(f"❌ Acceptance check failed: {e}")
        return EXIT_ACCEPTANCE
    except NumericalError as e:
        logger.error(f"❌ Numerical failure: {e}")
        for note in getattr(e, "__notes__", []):
            logger.error(f"   {note}")
        return EXIT_NUMERICAL
    except (ScenarioError, ValidationError, ValueError) as e:
        logger.error(f"❌ Invalid input: {e}")
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
