"""k-fold cross-validation of one regressor spec.

Each fold fits on the rows outside it: standardizer statistics and any kNN
neighbour-count search see the training part only. Folds are independent and
run on a joblib thread pool; every fold derives its own seed from the master
seed, so results do not depend on scheduling.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from joblib import Parallel, delayed

from windreg.core.errors import ModelError, WindRegError
from windreg.core.metrics.scores import get_metric, mae, rmse
from windreg.core.models.base import RegressionData, Regressor
from windreg.core.validation.seeding import derive_seed
from windreg.core.validation.specs import RegressorSpec, fit_spec, hyperparameters
from windreg.core.validation.splits import FoldAssignment

logger = logging.getLogger(__name__)

DEFAULT_CV_METRIC = "r2_score"


class FoldError(ModelError):
    """Wraps a failure inside one fold; ``fold`` is 0-based."""

    def __init__(self, fold: int, cause: Exception) -> None:
        super().__init__(f"Fold {fold}: {cause}")
        self.fold = fold
        self.cause = cause


@dataclass(frozen=True)
class FoldOutcome:
    fold: int
    score: float
    mae: float
    rmse: float
    n_train: int
    n_test: int
    hyperparameters: dict[str, Any] = field(default_factory=dict)
    model: Regressor | None = None


@dataclass(frozen=True)
class CvResult:
    spec: RegressorSpec
    metric: str
    folds: tuple[FoldOutcome, ...]
    average: float

    @property
    def fold_scores(self) -> list[float]:
        return [f.score for f in self.folds]

    @property
    def k(self) -> int:
        return len(self.folds)


def average_scores(scores: Sequence[float]) -> float:
    """Arithmetic mean, summed in fold order."""
    if not scores:
        raise ValueError("Cannot average zero fold scores")
    total = 0.0
    for score in scores:
        total += float(score)
    return total / len(scores)


def cross_validate(
    spec: RegressorSpec,
    data: RegressionData,
    folds: FoldAssignment,
    metric: str = DEFAULT_CV_METRIC,
    *,
    seed: int = 0,
    n_jobs: int = 1,
) -> CvResult:
    """Fit and score ``spec`` once per fold.

    Raises:
        FoldError: a fold's fit or scoring failed; names the fold.
    """
    score_fn = get_metric(metric)
    if folds.n != data.target.shape[0]:
        raise ValueError(
            f"Fold assignment covers {folds.n} rows, data has {data.target.shape[0]}"
        )

    def run(fold: int) -> FoldOutcome:
        train = folds.train_indices(fold)
        test = folds.test_indices(fold)
        try:
            model = fit_spec(
                spec,
                data.features[train],
                data.target[train],
                derive_seed(seed, fold),
                list(data.feature_names),
            )
            predicted = model.predict(data.features[test])
            actual = data.target[test]
            return FoldOutcome(
                fold=fold,
                score=score_fn(actual, predicted),
                mae=mae(actual, predicted),
                rmse=rmse(actual, predicted),
                n_train=int(train.shape[0]),
                n_test=int(test.shape[0]),
                hyperparameters=hyperparameters(model),
                model=model,
            )
        except WindRegError as exc:
            raise FoldError(fold, exc) from exc

    outcomes = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(run)(fold) for fold in range(folds.k)
    )
    outcomes = tuple(sorted(outcomes, key=lambda o: o.fold))
    result = CvResult(
        spec=spec,
        metric=metric,
        folds=outcomes,
        average=average_scores([o.score for o in outcomes]),
    )
    logger.info(
        "%d-fold CV of %s: mean %s %.4f", folds.k, spec.label, metric, result.average
    )
    return result
