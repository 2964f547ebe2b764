"""
Shared fixtures: seeded generators, engineered design matrices and CSV files.
"""
from pathlib import Path

import numpy as np
import pytest

from qridge.circuits.config import PhaseEstimationConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def pe10() -> PhaseEstimationConfig:
    return PhaseEstimationConfig(precision_bits=10)


@pytest.fixture
def dyadic_design() -> np.ndarray:
    """Unit-Frobenius X with normalized eigenvalues 0.75 and 0.25 (10-bit dyadic)."""
    return np.diag([np.sqrt(0.75), np.sqrt(0.25)])


@pytest.fixture
def half_design() -> np.ndarray:
    """diag(1, 0.5): kappa 2, normalized eigenvalues (0.8, 0.2), not dyadic."""
    return np.diag([1.0, 0.5])


def write_csv(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8", newline="")
    return path


@pytest.fixture
def identity_csv(tmp_path) -> Path:
    return write_csv(tmp_path / "identity.csv", "x1,x2,y\n1,0,3\n0,1,4\n")


@pytest.fixture
def nan_csv(tmp_path) -> Path:
    return write_csv(tmp_path / "nan.csv", "x1,x2,y\n1,nan,3\n0,1,4\n")


@pytest.fixture
def orthogonal_target_csv(tmp_path) -> Path:
    """y has no component in the column space of X, so every filter output is empty."""
    return write_csv(tmp_path / "orthogonal.csv", "x1,x2,y\n1,0,0\n0,0,1\n")


@pytest.fixture
def half_csv(tmp_path) -> Path:
    return write_csv(tmp_path / "half.csv", "x1,x2,y\n1,0,1\n0,0.5,1\n")


@pytest.fixture
def truncation_csv(tmp_path) -> Path:
    """diag(1, 0.3): a relative cutoff of 0.5 keeps only the first singular value."""
    return write_csv(tmp_path / "truncation.csv", "x1,x2,y\n1,0,1\n0,0.3,1\n")
