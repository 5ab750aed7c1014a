"""Model-agnostic permutation importance on the held-out part."""

from __future__ import annotations

import logging

import numpy as np

from windreg.core.metrics.scores import mae
from windreg.core.models.base import Importance, RegressionData, Regressor
from windreg.core.validation.seeding import rng
from windreg.core.validation.specs import RegressorSpec, fit_spec
from windreg.core.validation.splits import TrainTestSplit

logger = logging.getLogger(__name__)


def permutation_importance(
    spec: RegressorSpec,
    data: RegressionData,
    split: TrainTestSplit,
    repeats: int,
    seed: int,
    *,
    model: Regressor | None = None,
) -> Importance:
    """Mean test-MAE increase when one feature column is shuffled.

    Increases below zero count as zero. The vector is normalized to sum 1
    when any feature matters; otherwise it is all zeros and flagged
    degenerate. Pass ``model`` to reuse a fit on ``split.train``.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if model is None:
        model = fit_spec(
            spec,
            data.features[split.train],
            data.target[split.train],
            seed,
            list(data.feature_names),
        )

    x_test = np.array(data.features[split.test], dtype=float)
    y_test = data.target[split.test]
    baseline = mae(y_test, model.predict(x_test))

    increases = np.zeros(x_test.shape[1])
    for j in range(x_test.shape[1]):
        total = 0.0
        for r in range(repeats):
            shuffled = x_test.copy()
            shuffled[:, j] = rng(seed, j, r).permutation(shuffled[:, j])
            total += mae(y_test, model.predict(shuffled)) - baseline
        increases[j] = max(total / repeats, 0.0)

    overall = float(increases.sum())
    if overall <= 0.0:
        logger.warning("No feature raised the test MAE when permuted (%s)", spec.label)
        return Importance(values=tuple(0.0 for _ in increases), degenerate=True)
    return Importance(values=tuple(float(v) for v in increases / overall))
