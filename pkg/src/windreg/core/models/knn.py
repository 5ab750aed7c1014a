"""k-nearest-neighbour regression with inverse-distance weighting.

Procedure:

1. Euclidean distance from the query to every training row, in z-score
   standardized feature space.
2. Rows ordered by ascending distance; ties keep ascending training index.
3. k chosen by cross-validated RMSE (:func:`select_k`).
4. Prediction is the inverse-distance weighted mean of the k nearest targets;
   any zero-distance neighbour short-circuits to the plain mean of the
   coincident neighbours.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from windreg.core.errors import ModelError
from windreg.core.models.base import TooFewRowsError, as_matrix, as_query, as_target
from windreg.core.preprocessing.standardizer import Standardizer, fit_standardizer
from windreg.core.validation.splits import kfold

logger = logging.getLogger(__name__)

DISTANCE_METRIC = "euclidean"

# Queries are processed in blocks so the distance matrix stays bounded.
QUERY_CHUNK = 512

# Distances below the smallest normal float count as exact matches.
COINCIDENT_DISTANCE = float(np.finfo(float).tiny)


class InvalidKError(ModelError):
    """Raised when k is outside [1, n]."""


class InvalidCandidateError(ModelError):
    """Raised when a neighbour-count candidate cannot be evaluated."""


@dataclass(frozen=True)
class Neighbor:
    index: int
    distance: float


@dataclass(frozen=True)
class KnnModel:
    """Stored standardized training set, targets and neighbour count."""

    features: np.ndarray  # standardized, n×p
    target: np.ndarray
    k: int
    standardizer: Standardizer
    distance: str = DISTANCE_METRIC
    selected_from: tuple[int, ...] = field(default=())
    algorithm: str = "knn"

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=float)
        target = np.array(self.target, dtype=float)
        features.setflags(write=False)
        target.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "target", target)

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    def predict(self, features: np.ndarray) -> np.ndarray:
        return predict_knn_batch(self, features)


def fit_knn(
    features: np.ndarray,
    target: np.ndarray,
    k: int,
    standardizer: Standardizer | None = None,
    *,
    selected_from: Iterable[int] = (),
) -> KnnModel:
    """Store a standardized copy of the training data (lazy learner).

    When ``standardizer`` is omitted it is fitted on ``features``.
    """
    x = as_matrix(features)
    y = as_target(target, x.shape[0])
    n = x.shape[0]
    if not 1 <= k <= n:
        raise InvalidKError(f"k must lie in [1, {n}], got {k}")
    if standardizer is None:
        standardizer = fit_standardizer(x)
    return KnnModel(
        features=standardizer.transform(x),
        target=y,
        k=int(k),
        standardizer=standardizer,
        selected_from=tuple(int(c) for c in selected_from),
    )


def neighbors(model: KnnModel, query) -> list[Neighbor]:
    """Every training row ordered by distance to ``query`` (ties by index)."""
    q = model.standardizer.transform(as_query(query, model.n_features))
    distances = np.sqrt(np.sum((model.features - q) ** 2, axis=1))
    order = np.argsort(distances, kind="stable")
    return [Neighbor(index=int(i), distance=float(distances[i])) for i in order]


def predict_knn(model: KnnModel, query) -> float:
    """Inverse-distance weighted prediction for a single query point."""
    vector = as_query(query, model.n_features)
    return float(predict_knn_batch(model, vector.reshape(1, -1))[0])


def predict_knn_batch(model: KnnModel, features: np.ndarray) -> np.ndarray:
    """Predict every row of ``features``."""
    x = as_matrix(features, model.n_features)
    z = model.standardizer.transform(x)
    out = np.empty(z.shape[0])
    for start in range(0, z.shape[0], QUERY_CHUNK):
        block = z[start:start + QUERY_CHUNK]
        sorted_d, order = _sorted_distances(model.features, block)
        out[start:start + QUERY_CHUNK] = _weighted_mean(
            sorted_d[:, :model.k], model.target[order[:, :model.k]]
        )
    return out


def select_k(
    features: np.ndarray,
    target: np.ndarray,
    k_candidates: Iterable[int],
    folds: int,
    seed: int,
) -> int:
    """Pick the candidate with the lowest mean RMSE over ``folds`` folds.

    The standardizer is refitted on each fold's training part. Ties go to
    the smaller k.

    Raises:
        InvalidCandidateError: empty candidate set, or a candidate larger than
            the smallest training part.
        TooFewRowsError: fewer rows than folds, or folds < 2.
    """
    candidates = sorted({int(c) for c in k_candidates})
    if not candidates:
        raise InvalidCandidateError("k_candidates must not be empty")
    if candidates[0] < 1:
        raise InvalidCandidateError(f"Neighbour counts must be >= 1, got {candidates[0]}")
    if len(candidates) == 1:
        return candidates[0]

    x = as_matrix(features)
    y = as_target(target, x.shape[0])
    n = x.shape[0]
    if folds < 2 or n < folds:
        raise TooFewRowsError(f"Cannot run {folds}-fold k selection on {n} rows")

    assignment = kfold(n, folds, seed)
    smallest_train = n - max(assignment.sizes())
    if candidates[-1] > smallest_train:
        raise InvalidCandidateError(
            f"Candidate k={candidates[-1]} exceeds the smallest training part "
            f"({smallest_train} rows)"
        )

    max_k = candidates[-1]
    fold_rmse = np.zeros((len(candidates), folds))
    for f in range(folds):
        train_idx = assignment.train_indices(f)
        test_idx = assignment.test_indices(f)
        scaler = fit_standardizer(x[train_idx])
        train_z = scaler.transform(x[train_idx])
        test_z = scaler.transform(x[test_idx])
        train_y = y[train_idx]
        test_y = y[test_idx]

        sorted_d = np.empty((test_z.shape[0], max_k))
        nearest = np.empty((test_z.shape[0], max_k), dtype=int)
        for start in range(0, test_z.shape[0], QUERY_CHUNK):
            d, order = _sorted_distances(train_z, test_z[start:start + QUERY_CHUNK])
            sorted_d[start:start + QUERY_CHUNK] = d[:, :max_k]
            nearest[start:start + QUERY_CHUNK] = order[:, :max_k]

        for c, k in enumerate(candidates):
            pred = _weighted_mean(sorted_d[:, :k], train_y[nearest[:, :k]])
            fold_rmse[c, f] = math.sqrt(float(np.mean((test_y - pred) ** 2)))

    mean_rmse = fold_rmse.mean(axis=1)
    best = int(np.argmin(mean_rmse))  # first minimum → smallest k
    logger.info(
        "Selected k=%d (mean RMSE %.4g) from %d candidates over %d folds",
        candidates[best], mean_rmse[best], len(candidates), folds,
    )
    return candidates[best]


def _sorted_distances(train: np.ndarray, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distance rows sorted ascending, with the stable index permutation."""
    diff = queries[:, None, :] - train[None, :, :]
    distances = np.sqrt(np.sum(diff ** 2, axis=2))
    order = np.argsort(distances, axis=1, kind="stable")
    return np.take_along_axis(distances, order, axis=1), order


def _weighted_mean(distances: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Row-wise inverse-distance weighted mean; coincident neighbours win outright.

    Weights are ``d_min / d`` rather than ``1 / d``: same ratios, but every
    weight lies in (0, 1] so tiny distances cannot overflow.
    """
    zero = distances < COINCIDENT_DISTANCE
    has_zero = zero.any(axis=1)

    nearest = distances.min(axis=1, keepdims=True)
    weights = np.divide(nearest, distances, out=np.zeros_like(distances), where=~zero)
    weight_sum = weights.sum(axis=1)
    idw = np.divide(
        (weights * targets).sum(axis=1),
        weight_sum,
        out=np.zeros_like(weight_sum),
        where=weight_sum > 0,
    )

    zero_count = zero.sum(axis=1)
    coincident = np.divide(
        (targets * zero).sum(axis=1),
        zero_count,
        out=np.zeros(zero_count.shape),
        where=zero_count > 0,
    )
    return np.where(has_zero, coincident, idw)
