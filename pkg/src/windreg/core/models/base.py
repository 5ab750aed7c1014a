"""Shared model protocol and input checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from windreg.core.errors import DimensionMismatchError, ModelError


class TooFewRowsError(ModelError):
    """Raised when there are not enough training rows for the requested fit."""


class EmptyDatasetError(ModelError):
    """Raised when a model is fitted on zero rows."""


@runtime_checkable
class Regressor(Protocol):
    """Anything that maps an m×p feature matrix to m predictions (kW)."""

    algorithm: str

    @property
    def n_features(self) -> int: ...

    def predict(self, features: np.ndarray) -> np.ndarray: ...


def as_matrix(features, n_features: int | None = None) -> np.ndarray:
    """Coerce input to a float m×p matrix; a 1-D vector becomes a single row."""
    matrix = np.asarray(features, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-D feature matrix, got {matrix.ndim} dimensions")
    if n_features is not None and matrix.shape[1] != n_features:
        raise DimensionMismatchError(n_features, matrix.shape[1])
    return matrix


def as_query(x, n_features: int) -> np.ndarray:
    """Coerce a single query point to a length-p float vector."""
    vector = np.asarray(x, dtype=float).ravel()
    if vector.shape[0] != n_features:
        raise DimensionMismatchError(n_features, vector.shape[0])
    return vector


def as_target(target, n_rows: int) -> np.ndarray:
    vector = np.asarray(target, dtype=float).ravel()
    if vector.shape[0] != n_rows:
        raise ValueError(f"Target has {vector.shape[0]} values for {n_rows} feature rows")
    return vector


@dataclass(frozen=True)
class Importance:
    """Per-feature importance shares.

    ``degenerate`` is set when no feature earned any credit (a single-leaf
    tree, or permutations that never raised the error); ``values`` is then a
    documented fallback rather than a measurement.
    """

    values: tuple[float, ...]
    degenerate: bool = False

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@runtime_checkable
class RegressionData(Protocol):
    """Feature matrix, target vector and feature labels."""

    @property
    def features(self) -> np.ndarray: ...

    @property
    def target(self) -> np.ndarray: ...

    @property
    def feature_names(self) -> tuple[str, ...]: ...
