"""
CSV ingestion and optional standardization of training data.
"""
import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from qridge.linalg.arrays import RealMatrix, RealVector, as_real_vector, frozen
from qridge.utils.error_recovery import DatasetError
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)

TARGET_COLUMN = "y"


@dataclass(frozen=True)
class Dataset:
    X: RealMatrix
    y: RealVector
    feature_names: List[str]
    x_mean: Optional[RealVector] = None
    x_scale: Optional[RealVector] = None
    y_mean: float = 0.0

    @property
    def num_rows(self) -> int:
        return self.X.shape[0]

    @property
    def num_features(self) -> int:
        return self.X.shape[1]

    @property
    def y_norm(self) -> float:
        return float(np.linalg.norm(self.y))

    @property
    def standardized(self) -> bool:
        return self.x_mean is not None

    def transform_features(self, x_new: ArrayLike) -> RealVector:
        """Apply the training standardization (if any) to a new input."""
        x = as_real_vector(x_new, "x_new", self.num_features)
        if not self.standardized:
            return x
        return frozen((x - self.x_mean) / self.x_scale)

    def summary(self) -> dict:
        return {
            "rows": self.num_rows,
            "features": list(self.feature_names),
            "y_norm": self.y_norm,
            "standardized": self.standardized,
            "y_mean": self.y_mean,
        }


def _parse_cell(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetError(
            f"cannot parse '{text}' as a number", row=line, column=column
        ) from None
    if not np.isfinite(value):
        raise DatasetError(f"non-finite value '{text}'", row=line, column=column)
    return value


def load_csv(path: Union[str, Path]) -> Dataset:
    """
    Load a training set: header row, feature columns, last column named "y".

    Args:
        path: UTF-8 CSV file (LF or CRLF line endings)

    Returns:
        Dataset with M rows and N features

    Raises:
        DatasetError: unreadable or empty file, missing "y" column, or a bad cell
            (row numbers count the header as row 1)
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            rows = [row for row in csv.reader(handle)]
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetError(f"cannot read {path}: {e}") from e

    rows = [
        (line, row)
        for line, row in enumerate(rows, start=1)
        if any(cell.strip() for cell in row)
    ]
    if not rows:
        raise DatasetError(f"{path} is empty")
    _, header = rows[0]
    header = [name.strip() for name in header]
    if not header or header[-1] != TARGET_COLUMN:
        raise DatasetError(
            f"last column must be named '{TARGET_COLUMN}', header is {header}",
            row=1,
        )
    if len(header) < 2:
        raise DatasetError("need at least one feature column besides 'y'", row=1)
    if len(rows) < 2:
        raise DatasetError(f"{path} has a header but no data rows")

    values = []
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise DatasetError(
                f"expected {len(header)} fields, got {len(row)}", row=line
            )
        values.append(
            [_parse_cell(cell.strip(), line, name) for cell, name in zip(row, header)]
        )

    data = np.array(values, dtype=np.float64)
    logger.info(f"Loaded {path}: {data.shape[0]} rows, {data.shape[1] - 1} features")
    return Dataset(
        X=frozen(data[:, :-1]), y=frozen(data[:, -1]), feature_names=header[:-1]
    )


def standardize(dataset: Dataset) -> Dataset:
    """
    Centre and scale features (population std; constant columns keep scale 1)
    and centre y.
    """
    mean = dataset.X.mean(axis=0)
    scale = dataset.X.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    y_mean = float(dataset.y.mean())
    return replace(
        dataset,
        X=frozen((dataset.X - mean) / scale),
        y=frozen(dataset.y - y_mean),
        x_mean=frozen(mean),
        x_scale=frozen(scale),
        y_mean=y_mean,
    )
