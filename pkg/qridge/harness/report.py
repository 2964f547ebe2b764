"""
Machine-readable run reports and their deterministic serialization.
"""
import json
import math
import platform
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import scipy

import qridge
from qridge.utils.error_recovery import ReportWriteError
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)

INDENT = "  "
FLOAT_FORMAT = ".17g"


def versions() -> Dict[str, str]:
    return {
        "qridge": qridge.__version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


@dataclass
class Report:
    """
    One subcommand run: the echoed configuration, the quantum outcome, the
    classical oracle values and the bound check.
    """
    mode: str
    config: Dict[str, Any]
    dataset: Dict[str, Any]
    outcome: Dict[str, Any]
    classical: Dict[str, Any]
    checks: Dict[str, Any]
    within_bound: bool = True
    wall_clock_ms: Optional[float] = None
    versions: Dict[str, str] = field(default_factory=versions)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "mode": self.mode,
            "config": self.config,
            "dataset": self.dataset,
            "outcome": self.outcome,
            "classical": self.classical,
            "checks": self.checks,
            "within_bound": self.within_bound,
            "versions": self.versions,
        }
        if self.wall_clock_ms is not None:
            out["wall_clock_ms"] = self.wall_clock_ms
        return out


def _scalar(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return "null"
        if value == 0.0:
            # folds -0.0
            value = 0.0
        return format(value, FLOAT_FORMAT)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def _render(value: Any, depth: int, out: List[str]):
    pad = INDENT * (depth + 1)
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted((str(k), v) for k, v in value.items())
        for i, (key, item) in enumerate(items):
            out.append(f"{pad}{json.dumps(key, ensure_ascii=False)}: ")
            _render(item, depth + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(INDENT * depth + "}")
    elif isinstance(value, (list, tuple, np.ndarray)):
        items = list(value)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(items):
            out.append(pad)
            _render(item, depth + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(INDENT * depth + "]")
    else:
        out.append(_scalar(value))


def dumps_report(document: Union[Report, Dict[str, Any]]) -> str:
    """
    Serialize a report: sorted keys, two-space indent, floats with 17 significant
    digits, non-finite floats as null, trailing newline.
    """
    if isinstance(document, Report):
        document = document.to_dict()
    out: List[str] = []
    _render(document, 0, out)
    out.append("\n")
    return "".join(out)


def parse_report(text: str) -> Dict[str, Any]:
    return json.loads(text)


def emit_report(
    report: Union[Report, Dict[str, Any]], path: Optional[Union[str, Path]] = None
):
    """
    Write a report to `path`, or to stdout when path is None.

    Raises:
        ReportWriteError: the file cannot be written
    """
    text = dumps_report(report)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise ReportWriteError(str(path), e.strerror or str(e))
    logger.info(f"Report written to {path}")
