"""
Command-line entry point: `qridge {predict,tune,compare,spectrum}`.

Exit codes: 0 when the run stays within its error bound, 1 for a numerical
failure or a run outside the bound, 2 for usage and configuration errors.
"""
import argparse
import sys
import time
from typing import Any, Dict, List, Optional

import numpy as np

from qridge import __version__
from qridge.algorithms.alpha import LINEAR, LOG
from qridge.circuits.config import DEFAULT_PRECISION_BITS
from qridge.harness.config import DEFAULT_ALPHA_COUNT, RunConfig
from qridge.harness.dataset import load_csv
from qridge.harness.report import dumps_report, emit_report
from qridge.harness.runner import run_compare, run_predict, run_spectrum, run_tune
from qridge.linalg.svd import DEFAULT_LAMBDA_CUTOFF
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET
from qridge.utils.error_recovery import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    ConfigurationError,
    exit_on_error,
)
from qridge.utils.logging_config import get_logger, setup_logging

logger = get_logger(__name__)


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--data", required=True, help="Training CSV (last column named y)"
    )
    parent.add_argument("--bits", type=int, default=DEFAULT_PRECISION_BITS,
                        help="Clock register width t")
    parent.add_argument("--shots", type=int, default=0,
                        help="Swap-test shots (0 = exact probabilities)")
    parent.add_argument(
        "--seed", type=int, default=None, help="Master seed for sampling"
    )
    evolution = parent.add_mutually_exclusive_group()
    evolution.add_argument("--exact", action="store_true",
                           help="Exact matrix exponential (default)")
    evolution.add_argument(
        "--lmr-steps",
        type=int,
        default=None,
        help="Approximate e^{i rho t0} with this many partial-swap slices",
    )
    parent.add_argument("--evolution-time", type=float, default=float(np.pi), help="t0")
    parent.add_argument("--lambda-cutoff", type=float, default=DEFAULT_LAMBDA_CUTOFF,
                        help="Relative singular-value truncation")
    parent.add_argument("--qubit-budget", type=int, default=DEFAULT_QUBIT_BUDGET)
    parent.add_argument("--standardize", action="store_true",
                        help="Centre and scale features and centre y")
    parent.add_argument("--out", default=None, help="Report path (stdout when omitted)")
    parent.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parent.add_argument("--log-file", action="store_true", default=None,
                        help="Also log to logs/qridge.log")
    parent.add_argument("--record-timing", action="store_true",
                        help="Put wall-clock time into the report")
    return parent


def _alpha_options(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--alpha", type=float, required=True, help="Regularization in data units"
    )
    parser.add_argument(
        "--c1", type=float, default=None, help="Explicit C1 (default: auto)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qridge",
        description=(
            "Simulate quantum ridge regression circuits and check them against "
            "the SVD oracle."
        ),
    )
    parser.add_argument("--version", action="version", version=f"qridge {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    predict = subparsers.add_parser(
        "predict", parents=[common], help="Predict y' for one new input"
    )
    predict.add_argument(
        "--x-new", required=True, help="Comma-separated feature values"
    )
    _alpha_options(predict)

    tune = subparsers.add_parser(
        "tune", parents=[common], help="Select alpha on a grid"
    )
    tune.add_argument("--alpha-min", type=float, default=None)
    tune.add_argument("--alpha-max", type=float, default=None)
    tune.add_argument("--alpha-count", type=int, default=DEFAULT_ALPHA_COUNT)
    tune.add_argument("--alpha-spacing", choices=[LINEAR, LOG], default=LINEAR)
    tune.add_argument("--c2", type=float, default=1.0)
    tune.add_argument(
        "--jobs", type=int, default=1, help="Concurrent alpha evaluations"
    )

    compare = subparsers.add_parser(
        "compare",
        parents=[common],
        help="Predict every training row and compare with fitted values",
    )
    _alpha_options(compare)

    subparsers.add_parser("spectrum", parents=[common], help="Report the spectrum of X")
    return parser


def _emit_error(payload: Dict[str, Any]):
    sys.stdout.write(dumps_report(payload))
    sys.stdout.flush()


@exit_on_error(emit=_emit_error)
def run(args: argparse.Namespace) -> int:
    """Execute one parsed subcommand and write its report."""
    try:
        setup_logging(log_level=args.log_level, log_to_file=args.log_file)
    except ValueError as e:
        raise ConfigurationError(str(e)) from e
    config = RunConfig.from_namespace(args)
    dataset = load_csv(config.data)
    started = time.perf_counter()

    if config.mode == "predict":
        report = run_predict(dataset, config.x_new, config.required_alpha(), config)
    elif config.mode == "tune":
        report = run_tune(dataset, config)
    elif config.mode == "compare":
        report = run_compare(dataset, config.required_alpha(), config)
    else:
        report = run_spectrum(dataset, config)

    elapsed_ms = (time.perf_counter() - started) * 1000.0
    logger.info(f"{config.mode} finished in {elapsed_ms:.1f} ms")
    if args.record_timing:
        report.wall_clock_ms = elapsed_ms
    emit_report(report, args.out)
    return EXIT_OK if report.within_bound else EXIT_NUMERICAL


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage and 0 after --help/--version
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
