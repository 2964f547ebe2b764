"""
Operator-facing harness: datasets, run configuration, experiments and reports.
"""
from qridge.harness.config import RunConfig
from qridge.harness.dataset import Dataset, load_csv, standardize
from qridge.harness.report import Report, dumps_report, emit_report, parse_report
from qridge.harness.runner import run_compare, run_predict, run_spectrum, run_tune

__all__ = [
    "Dataset",
    "Report",
    "RunConfig",
    "dumps_report",
    "emit_report",
    "load_csv",
    "parse_report",
    "run_compare",
    "run_predict",
    "run_spectrum",
    "run_tune",
    "standardize",
]
