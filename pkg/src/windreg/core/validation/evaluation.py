"""Hold-out evaluation of several regressors on one train/test split."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from windreg.core.errors import UsageError
from windreg.core.metrics.scores import ScorePair, score_all
from windreg.core.models.base import Importance, RegressionData, Regressor
from windreg.core.models.tree import Tree, tree_importance
from windreg.core.validation.importance import permutation_importance
from windreg.core.validation.seeding import derive_seed
from windreg.core.validation.specs import RegressorSpec, fit_spec, hyperparameters
from windreg.core.validation.splits import SplitConfig, TrainTestSplit, split_from_config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelEvaluation:
    spec: RegressorSpec
    scores: ScorePair
    predictions: np.ndarray           # on split.test, in index order
    model: Regressor
    hyperparameters: dict[str, Any] = field(default_factory=dict)
    permutation: Importance | None = None

    @property
    def label(self) -> str:
        return self.spec.label


@dataclass(frozen=True)
class EvalResult:
    models: tuple[ModelEvaluation, ...]
    split: TrainTestSplit
    feature_names: tuple[str, ...]
    tree_importance: Importance | None = None

    @property
    def n_train(self) -> int:
        return self.split.n_train

    @property
    def n_test(self) -> int:
        return self.split.n_test

    @property
    def seed(self) -> int:
        return self.split.seed

    def get(self, label: str) -> ModelEvaluation:
        for evaluation in self.models:
            if evaluation.label == label:
                return evaluation
        raise KeyError(label)


def evaluate(
    specs: Sequence[RegressorSpec],
    data: RegressionData,
    split_config: SplitConfig,
    *,
    permutation_repeats: int = 5,
) -> EvalResult:
    """Fit every spec on the training part and score it on the test part.

    Also computes permutation importance for every model and, when a tree is
    among the specs, the tree's impurity importance.
    """
    if not specs:
        raise UsageError("evaluate needs at least one regressor spec")
    labels = [s.label for s in specs]
    if len(set(labels)) != len(labels):
        raise UsageError(f"Regressor labels must be unique, got {labels}")

    n = int(data.target.shape[0])
    split = split_from_config(n, split_config)
    x_train, y_train = data.features[split.train], data.target[split.train]
    x_test, y_test = data.features[split.test], data.target[split.test]
    names = list(data.feature_names)

    evaluations: list[ModelEvaluation] = []
    tree_scores: Importance | None = None
    for i, spec in enumerate(specs):
        model = fit_spec(spec, x_train, y_train, derive_seed(split_config.seed, i, 0), names)
        predictions = model.predict(x_test)
        permutation = (
            permutation_importance(
                spec,
                data,
                split,
                permutation_repeats,
                derive_seed(split_config.seed, i, 1),
                model=model,
            )
            if permutation_repeats > 0
            else None
        )
        if tree_scores is None and isinstance(model, Tree):
            tree_scores = tree_importance(model)

        scores = score_all(y_test, predictions)
        evaluations.append(
            ModelEvaluation(
                spec=spec,
                scores=scores,
                predictions=predictions,
                model=model,
                hyperparameters=hyperparameters(model),
                permutation=permutation,
            )
        )
        logger.info(
            "%s: test MAE %.2f kW, R² %.4f", spec.label, scores.mae, scores.r2_score
        )

    return EvalResult(
        models=tuple(evaluations),
        split=split,
        feature_names=tuple(names),
        tree_importance=tree_scores,
    )
