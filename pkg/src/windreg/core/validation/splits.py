"""Train/test splits and k-fold assignments."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from windreg.core.errors import DataError

logger = logging.getLogger(__name__)


class DegenerateSplitError(DataError):
    """Raised when a split would leave the train or test part empty."""


class InvalidFoldCountError(DataError):
    """Raised when the fold count is outside [2, n]."""


@dataclass(frozen=True)
class SplitConfig:
    test_fraction: float = 0.2
    seed: int = 42
    chronological: bool = False


@dataclass(frozen=True)
class TrainTestSplit:
    """Sorted, disjoint row indices covering ``range(n)``."""

    train: np.ndarray
    test: np.ndarray
    seed: int
    chronological: bool = False

    def __post_init__(self) -> None:
        for name in ("train", "test"):
            values = np.array(getattr(self, name), dtype=int)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def n_train(self) -> int:
        return int(self.train.shape[0])

    @property
    def n_test(self) -> int:
        return int(self.test.shape[0])


def held_out_size(n: int, test_fraction: float) -> int:
    """Rows held out for testing: fraction·n rounded half up (4464·0.2 → 893)."""
    return int(test_fraction * n + 0.5)


def split_train_test(
    n: int,
    test_fraction: float,
    seed: int,
    *,
    chronological: bool = False,
) -> TrainTestSplit:
    """Split ``range(n)`` into train and test indices.

    The shuffled mode draws a seeded permutation and takes its first
    ``held_out_size`` entries as the test part. Chronological mode holds out the
    last rows instead.

    Raises:
        DegenerateSplitError: fraction outside (0, 1), n < 2, or an empty part.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DegenerateSplitError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if n < 2:
        raise DegenerateSplitError(f"Cannot split {n} rows into train and test parts")
    n_test = held_out_size(n, test_fraction)
    if n_test == 0 or n_test == n:
        raise DegenerateSplitError(
            f"test_fraction {test_fraction} on {n} rows leaves an empty part"
        )

    if chronological:
        test = np.arange(n - n_test, n)
        train = np.arange(0, n - n_test)
    else:
        order = np.random.default_rng(seed).permutation(n)
        test = np.sort(order[:n_test])
        train = np.sort(order[n_test:])

    logger.debug("Split %d rows into %d train / %d test", n, n - n_test, n_test)
    return TrainTestSplit(train=train, test=test, seed=seed, chronological=chronological)


def split_from_config(n: int, config: SplitConfig) -> TrainTestSplit:
    return split_train_test(
        n, config.test_fraction, config.seed, chronological=config.chronological
    )


@dataclass(frozen=True)
class FoldAssignment:
    """Fold index in ``[0, k)`` for every row."""

    k: int
    assignment: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.assignment, dtype=int)
        values.setflags(write=False)
        object.__setattr__(self, "assignment", values)

    @property
    def n(self) -> int:
        return int(self.assignment.shape[0])

    def sizes(self) -> list[int]:
        return np.bincount(self.assignment, minlength=self.k).tolist()

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def kfold(n: int, k: int, seed: int) -> FoldAssignment:
    """Shuffle rows with ``seed`` and deal them round-robin into ``k`` folds.

    Fold sizes are ⌊n/k⌋ or ⌈n/k⌉; the first ``n mod k`` folds get the extra row.

    Raises:
        InvalidFoldCountError: k < 2 or k > n.
    """
    if k < 2 or k > n:
        raise InvalidFoldCountError(f"Fold count must lie in [2, {n}], got {k}")
    order = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=int)
    assignment[order] = np.arange(n) % k
    return FoldAssignment(k=k, assignment=assignment)
