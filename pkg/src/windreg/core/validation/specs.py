"""Regressor specifications: which algorithm to fit and with what settings."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from windreg.core.errors import UsageError
from windreg.core.models.base import Regressor
from windreg.core.models.knn import InvalidCandidateError, KnnModel, fit_knn, select_k
from windreg.core.models.linear import fit_linear
from windreg.core.models.tree import Tree, TreeParams, fit_tree

logger = logging.getLogger(__name__)

ALGORITHMS = ("linear", "knn", "tree")

DISPLAY_NAMES = {
    "linear": "Linear Regression",
    "knn": "k-Nearest Neighbor Regression",
    "tree": "Decision Tree Regression",
}

DEFAULT_K_CANDIDATES = tuple(range(1, 26))
DEFAULT_INNER_FOLDS = 5


@dataclass(frozen=True)
class RegressorSpec:
    """An algorithm tag plus its hyperparameters.

    kNN either uses a fixed ``k`` or searches ``k_candidates`` with
    ``inner_folds``-fold cross-validation on whatever training data it is given.
    ``seed`` pins that search; when unset the caller's seed is used.
    """

    algorithm: str
    name: str | None = None
    k: int | None = None
    k_candidates: tuple[int, ...] = DEFAULT_K_CANDIDATES
    inner_folds: int = DEFAULT_INNER_FOLDS
    tree_params: TreeParams = field(default_factory=TreeParams)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise UsageError(
                f"Unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}"
            )
        object.__setattr__(self, "k_candidates", tuple(int(c) for c in self.k_candidates))
        if self.algorithm == "knn":
            if self.k is not None and self.k < 1:
                raise UsageError(f"k must be >= 1, got {self.k}")
            if self.k is None and not self.k_candidates:
                raise UsageError("kNN needs either k or a non-empty candidate set")
            if self.inner_folds < 2:
                raise UsageError(f"inner_folds must be >= 2, got {self.inner_folds}")

    @property
    def label(self) -> str:
        return self.name or self.algorithm

    @property
    def display_name(self) -> str:
        return DISPLAY_NAMES[self.algorithm] if self.name is None else self.name


def default_specs(
    *,
    knn_max_k: int = DEFAULT_K_CANDIDATES[-1],
    inner_folds: int = DEFAULT_INNER_FOLDS,
) -> list[RegressorSpec]:
    """The three regressors in reporting order: linear, kNN, tree."""
    return [
        RegressorSpec("linear"),
        RegressorSpec(
            "knn",
            k_candidates=tuple(range(1, knn_max_k + 1)),
            inner_folds=inner_folds,
        ),
        RegressorSpec("tree"),
    ]


def fit_spec(
    spec: RegressorSpec,
    features: np.ndarray,
    target: np.ndarray,
    seed: int,
    feature_names: list[str] | None = None,
) -> Regressor:
    """Fit ``spec`` on exactly the rows given; nothing outside them is consulted."""
    if spec.algorithm == "linear":
        return fit_linear(features, target, feature_names)
    if spec.algorithm == "tree":
        return fit_tree(features, target, spec.tree_params)

    if spec.k is not None:
        return fit_knn(features, target, spec.k)
    search_seed = spec.seed if spec.seed is not None else seed
    candidates = feasible_candidates(spec.k_candidates, len(target), spec.inner_folds)
    k = select_k(features, target, candidates, spec.inner_folds, search_seed)
    return fit_knn(features, target, k, selected_from=candidates)


def feasible_candidates(candidates: tuple[int, ...], n: int, folds: int) -> tuple[int, ...]:
    """Drop neighbour counts larger than the smallest inner training part."""
    smallest_train = n - math.ceil(n / folds)
    kept = tuple(sorted(c for c in set(candidates) if c <= smallest_train))
    if not kept:
        raise InvalidCandidateError(
            f"No k candidate fits the smallest inner training part ({smallest_train} rows)"
        )
    if len(kept) < len(set(candidates)):
        logger.warning(
            "Dropped k candidates above %d for %d rows and %d inner folds",
            smallest_train, n, folds,
        )
    return kept


def hyperparameters(model: Regressor) -> dict[str, Any]:
    """The settings a fitted model ended up with, for reports."""
    if isinstance(model, KnnModel):
        return {"k": model.k}
    if isinstance(model, Tree):
        return {"depth": model.depth, "leaves": model.n_leaves}
    return {}
