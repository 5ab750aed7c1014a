"""Shared test fixtures for windreg tests."""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

# ---------------------------------------------------------------------------
# Test hermeticity
# ---------------------------------------------------------------------------

@pytest.fixture(autouse=True)
def _force_hermetic_test_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    for name in list(os.environ):
        if name.startswith("WINDREG_"):
            monkeypatch.delenv(name, raising=False)
    # Keep a stray .env in the working directory out of Settings.
    monkeypatch.chdir(tmp_path)


@pytest.fixture(autouse=True)
def _restore_root_logger():
    """CLI runs install a stderr handler on the root logger; undo it after each test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


# Allow running tests without `pip install -e .` by making `src/` importable.
_PROJECT_ROOT = Path(__file__).resolve().parent.parent
_SRC_DIR = _PROJECT_ROOT / "src"
if str(_SRC_DIR) not in sys.path:
    sys.path.insert(0, str(_SRC_DIR))

from windreg.domains.wind.dataset.loader import write_csv  # noqa: E402
from windreg.domains.wind.dataset.models import Dataset  # noqa: E402
from windreg.domains.wind.dataset.synthetic import SynthConfig, generate_synthetic  # noqa: E402


# ---------------------------------------------------------------------------
# Data helpers
# ---------------------------------------------------------------------------

def make_dataset(features, target, timestamps=None) -> Dataset:
    """Dataset from plain lists; features are n×4."""
    return Dataset(
        features=np.asarray(features, dtype=float),
        target=np.asarray(target, dtype=float),
        timestamps=timestamps,
    )


@dataclass(frozen=True)
class ArrayData:
    """Plain arrays satisfying the RegressionData protocol."""

    features: np.ndarray
    target: np.ndarray
    feature_names: tuple[str, ...] = ()

    @classmethod
    def of(cls, features, target) -> ArrayData:
        x = np.asarray(features, dtype=float)
        names = tuple(f"x{j}" for j in range(x.shape[1]))
        return cls(features=x, target=np.asarray(target, dtype=float), feature_names=names)


def make_synthetic(n: int = 200, seed: int = 3) -> Dataset:
    return generate_synthetic(SynthConfig(n=n, seed=seed))


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def step_data() -> tuple[np.ndarray, np.ndarray]:
    """One feature, a clean step between 1 and 2: the best split is unambiguous."""
    x = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0.0, 0.0, 10.0, 10.0])
    return x, y


@pytest.fixture
def small_dataset() -> Dataset:
    return make_synthetic(n=200, seed=3)


@pytest.fixture
def dataset_csv(tmp_path: Path, small_dataset: Dataset) -> Path:
    return write_csv(small_dataset, tmp_path / "data.csv")
