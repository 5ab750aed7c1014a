"""CART-style binary regression tree.

Splits minimize the weighted population variance of the two children. A row
goes left when ``x[feature] <= threshold``; thresholds are midpoints between
consecutive distinct training values. Leaves predict the mean target of the
training rows that reach them.

Construction uses an explicit stack, so deep trees never hit the interpreter
recursion limit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from windreg.core.errors import ModelError
from windreg.core.models.base import (
    EmptyDatasetError,
    Importance,
    as_matrix,
    as_query,
    as_target,
)

logger = logging.getLogger(__name__)

# Splits must beat the parent impurity by more than this fraction of it;
# anything smaller is floating-point noise from the running sums.
RELATIVE_GAIN_FLOOR = 1e-12

# Objectives closer than this fraction of the parent impurity count as tied.
# Each feature accumulates its sums in its own sort order, so exact ties
# between partitions come out a few ulps apart.
TIE_TOLERANCE = 1e-9


class InvalidTreeParamsError(ModelError):
    """Raised when stopping rules are inconsistent."""


@dataclass(frozen=True)
class TreeParams:
    """Stopping rules. The defaults grow a full tree."""

    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    min_impurity_decrease: float = 0.0

    def __post_init__(self) -> None:
        if self.max_depth is not None and self.max_depth < 0:
            raise InvalidTreeParamsError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise InvalidTreeParamsError(
                f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}"
            )
        if self.min_samples_split < 2 * self.min_samples_leaf:
            raise InvalidTreeParamsError(
                f"min_samples_split ({self.min_samples_split}) must be at least "
                f"2 * min_samples_leaf ({2 * self.min_samples_leaf})"
            )
        if self.min_impurity_decrease < 0:
            raise InvalidTreeParamsError("min_impurity_decrease must be >= 0")


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    objective: float        # (n_L·var_L + n_R·var_R) / n
    n_left: int
    n_right: int
    impurity: float         # parent variance

    @property
    def decrease(self) -> float:
        return self.impurity - self.objective


@dataclass
class LeafNode:
    prediction: float
    samples: int


@dataclass
class InternalNode:
    feature: int
    threshold: float
    samples: int
    impurity: float
    impurity_decrease: float
    left: TreeNode | None = None
    right: TreeNode | None = None


TreeNode = LeafNode | InternalNode


@dataclass(frozen=True)
class LeafPath:
    """Conditions on the way from the root to one leaf."""

    leaf: LeafNode
    conditions: tuple[tuple[int, float, bool], ...]  # (feature, threshold, went_left)


@dataclass(frozen=True)
class Tree:
    root: TreeNode
    n_features: int
    n_samples: int
    params: TreeParams = field(default_factory=TreeParams)
    algorithm: str = "tree"

    def leaves(self) -> list[LeafNode]:
        """Leaves in left-to-right order."""
        return [path.leaf for path in leaf_paths(self)]

    @property
    def n_leaves(self) -> int:
        return len(self.leaves())

    @property
    def depth(self) -> int:
        deepest = 0
        stack: list[tuple[TreeNode, int]] = [(self.root, 0)]
        while stack:
            node, level = stack.pop()
            deepest = max(deepest, level)
            if isinstance(node, InternalNode):
                stack.append((node.left, level + 1))
                stack.append((node.right, level + 1))
        return deepest

    def internal_nodes(self) -> list[InternalNode]:
        found: list[InternalNode] = []
        stack: list[TreeNode] = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, InternalNode):
                found.append(node)
                stack.append(node.right)
                stack.append(node.left)
        return found

    def predict(self, features: np.ndarray) -> np.ndarray:
        return predict_tree_batch(self, features)


def best_split(
    features: np.ndarray,
    target: np.ndarray,
    rows: np.ndarray | None = None,
    params: TreeParams | None = None,
) -> Split | None:
    """Exhaustive search for the variance-minimizing split of ``rows``.

    Ties go to the lower feature index, then the lower threshold. Returns
    ``None`` when the subset is too small, the target is constant, or no
    candidate improves impurity by more than ``min_impurity_decrease``.
    """
    params = params or TreeParams()
    x = as_matrix(features)
    y = as_target(target, x.shape[0])
    if rows is None:
        rows = np.arange(x.shape[0])
    m = int(rows.shape[0])
    if m < params.min_samples_split or m < 2 * params.min_samples_leaf:
        return None

    y_sub = y[rows]
    if np.all(y_sub == y_sub[0]):
        return None

    centered = y_sub - y_sub.mean()
    total = float(centered.sum())
    total_sq = float(centered @ centered)
    parent = total_sq / m
    floor = max(params.min_impurity_decrease, RELATIVE_GAIN_FLOOR * parent)
    tol = TIE_TOLERANCE * parent

    leaf = params.min_samples_leaf
    counts = np.arange(leaf, m - leaf + 1)  # left sizes allowed by min_samples_leaf
    best: Split | None = None
    for j in range(x.shape[1]):
        column = x[rows, j]
        order = np.argsort(column, kind="stable")
        xs = column[order]
        ys = centered[order]
        cum = np.cumsum(ys)
        cum_sq = np.cumsum(ys * ys)

        left_sum = cum[counts - 1]
        left_sq = cum_sq[counts - 1]
        right_sum = total - left_sum
        right_sq = total_sq - left_sq
        sse = (left_sq - left_sum**2 / counts) + (right_sq - right_sum**2 / (m - counts))
        objective = sse / m

        valid = xs[counts - 1] < xs[counts]
        if not np.any(valid):
            continue
        candidate = np.where(valid, objective, np.inf)
        # lowest threshold within tolerance of this feature's minimum
        i = int(np.argmax(candidate <= candidate.min() + tol))
        if best is not None and not candidate[i] < best.objective - tol:
            continue
        n_left = int(counts[i])
        low, high = float(xs[n_left - 1]), float(xs[n_left])
        threshold = (low + high) / 2.0
        if not low <= threshold < high:
            threshold = low
        best = Split(
            feature=j,
            threshold=threshold,
            objective=float(candidate[i]),
            n_left=n_left,
            n_right=m - n_left,
            impurity=parent,
        )

    if best is None or not best.decrease > floor:
        return None
    return best


def fit_tree(
    features: np.ndarray,
    target: np.ndarray,
    params: TreeParams | None = None,
) -> Tree:
    """Grow a tree depth-first, left child before right.

    Raises:
        EmptyDatasetError: no training rows.
    """
    params = params or TreeParams()
    x = as_matrix(features)
    y = as_target(target, x.shape[0])
    n = x.shape[0]
    if n == 0:
        raise EmptyDatasetError("Cannot grow a tree on zero rows")

    root_holder: list[TreeNode] = []
    # (rows, depth, parent, is_left)
    stack: list[tuple[np.ndarray, int, InternalNode | None, bool]] = [
        (np.arange(n), 0, None, True)
    ]
    while stack:
        rows, depth, parent, is_left = stack.pop()
        split = None
        if params.max_depth is None or depth < params.max_depth:
            split = best_split(x, y, rows, params)

        if split is None:
            node: TreeNode = LeafNode(prediction=float(y[rows].mean()), samples=int(rows.shape[0]))
        else:
            goes_left = x[rows, split.feature] <= split.threshold
            node = InternalNode(
                feature=split.feature,
                threshold=split.threshold,
                samples=int(rows.shape[0]),
                impurity=split.impurity,
                impurity_decrease=split.decrease,
            )
            stack.append((rows[~goes_left], depth + 1, node, False))
            stack.append((rows[goes_left], depth + 1, node, True))

        if parent is None:
            root_holder.append(node)
        elif is_left:
            parent.left = node
        else:
            parent.right = node

    tree = Tree(root=root_holder[0], n_features=x.shape[1], n_samples=n, params=params)
    logger.debug(
        "Grew tree on %d rows: depth %d, %d leaves", n, tree.depth, tree.n_leaves
    )
    return tree


def predict_tree(tree: Tree, x) -> float:
    """Route one query from the root; ``<=`` goes left."""
    vector = as_query(x, tree.n_features)
    node = tree.root
    while isinstance(node, InternalNode):
        node = node.left if vector[node.feature] <= node.threshold else node.right
    return node.prediction


def predict_tree_batch(tree: Tree, features: np.ndarray) -> np.ndarray:
    """Route every row of ``features`` at once."""
    x = as_matrix(features, tree.n_features)
    out = np.empty(x.shape[0])
    stack: list[tuple[TreeNode, np.ndarray]] = [(tree.root, np.arange(x.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if rows.shape[0] == 0:
            continue
        if isinstance(node, LeafNode):
            out[rows] = node.prediction
            continue
        goes_left = x[rows, node.feature] <= node.threshold
        stack.append((node.left, rows[goes_left]))
        stack.append((node.right, rows[~goes_left]))
    return out


def tree_importance(tree: Tree) -> Importance:
    """Normalized sample-weighted impurity decrease per split feature.

    A tree without splits returns the uniform vector ``1/p`` flagged as
    degenerate.
    """
    scores = np.zeros(tree.n_features)
    for node in tree.internal_nodes():
        scores[node.feature] += (node.samples / tree.n_samples) * node.impurity_decrease

    total = float(scores.sum())
    if total <= 0.0:
        logger.warning("Tree has no splits; reporting uniform importance")
        uniform = 1.0 / tree.n_features
        return Importance(values=tuple(uniform for _ in range(tree.n_features)), degenerate=True)
    return Importance(values=tuple(float(v) for v in scores / total))


def leaf_paths(tree: Tree) -> list[LeafPath]:
    """Every leaf with the routing conditions that lead to it, left to right."""
    paths: list[LeafPath] = []
    stack: list[tuple[TreeNode, tuple[tuple[int, float, bool], ...]]] = [(tree.root, ())]
    while stack:
        node, conditions = stack.pop()
        if isinstance(node, LeafNode):
            paths.append(LeafPath(leaf=node, conditions=conditions))
            continue
        stack.append((node.right, (*conditions, (node.feature, node.threshold, False))))
        stack.append((node.left, (*conditions, (node.feature, node.threshold, True))))
    return paths


def indicator(path: LeafPath, x) -> int:
    """1 when ``x`` reaches the leaf at the end of ``path``, else 0."""
    vector = np.asarray(x, dtype=float).ravel()
    for feature, threshold, went_left in path.conditions:
        if (vector[feature] <= threshold) != went_left:
            return 0
    return 1
