"""Ordinary least squares multiple linear regression.

    y_i = β0 + β1·x_i1 + … + βp·x_ip + ε_i

Coefficients come from a QR decomposition of the intercept-augmented design
matrix; the normal equations are never formed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from windreg.core.errors import ModelError
from windreg.core.models.base import TooFewRowsError, as_matrix, as_target

logger = logging.getLogger(__name__)

# A column is numerically dependent when its QR diagonal falls below this
# fraction of the largest design-matrix column norm.
RANK_TOLERANCE = 1e-10


class RankDeficientError(ModelError):
    """Raised when a design column is a linear combination of earlier ones."""

    def __init__(self, column: str) -> None:
        super().__init__(f"Design matrix is rank deficient: column {column!r} is dependent")
        self.column = column


@dataclass(frozen=True)
class LinearModel:
    """Fitted intercept and slopes plus a training residual summary."""

    intercept: float
    slopes: tuple[float, ...]
    training_residual_std: float = 0.0
    algorithm: str = "linear"

    @property
    def n_features(self) -> int:
        return len(self.slopes)

    def predict(self, features: np.ndarray) -> np.ndarray:
        return predict_linear(self, features)


def fit_linear(
    features: np.ndarray,
    target: np.ndarray,
    feature_names: list[str] | None = None,
) -> LinearModel:
    """Fit β minimizing Σ(y − β0 − Σ βk·xk)².

    Raises:
        TooFewRowsError: fewer than p + 1 rows.
        RankDeficientError: a column (or the intercept) is numerically dependent.
    """
    x = as_matrix(features)
    y = as_target(target, x.shape[0])
    n, p = x.shape
    if n < p + 1:
        raise TooFewRowsError(f"OLS with {p} features needs at least {p + 1} rows, got {n}")

    design = np.column_stack([np.ones(n), x])
    q, r = np.linalg.qr(design, mode="reduced")

    column_norms = np.linalg.norm(design, axis=0)
    tolerance = RANK_TOLERANCE * float(column_norms.max())
    diagonal = np.abs(np.diag(r))
    for j in range(p + 1):
        if diagonal[j] <= tolerance:
            raise RankDeficientError(_column_label(j, feature_names))

    beta = solve_triangular(r, q.T @ y, lower=False)
    residuals = y - design @ beta
    dof = n - p - 1
    residual_std = math.sqrt(float(residuals @ residuals) / dof) if dof > 0 else 0.0

    model = LinearModel(
        intercept=float(beta[0]),
        slopes=tuple(float(b) for b in beta[1:]),
        training_residual_std=residual_std,
    )
    logger.debug("Fitted OLS on %d rows x %d features (residual std %.4g)", n, p, residual_std)
    return model


def predict_linear(model: LinearModel, features: np.ndarray) -> np.ndarray:
    """ŷ = β0 + Σ βk·xk for every row."""
    x = as_matrix(features, model.n_features)
    return model.intercept + x @ np.asarray(model.slopes, dtype=float)


def _column_label(index: int, feature_names: list[str] | None) -> str:
    if index == 0:
        return "intercept"
    if feature_names and index - 1 < len(feature_names):
        return feature_names[index - 1]
    return f"x{index - 1}"
