"""Error and goodness-of-fit measures for ranking regressors.

Two coefficient-of-determination variants are provided:

* ``r2_ratio``: explained-to-total sum of squares, Σ(ŷ−ȳ)² / Σ(y−ȳ)².
  Equals ``r2_score`` only for least-squares fits evaluated on their own
  training data; it can exceed 1 for other predictors.
* ``r2_score``: the conventional 1 − SSres/SStot, never above 1. This is the
  default wherever a single R² is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from windreg.core.errors import DataError


class MetricError(DataError):
    """Raised when metric inputs violate their preconditions."""


class LengthMismatchError(MetricError):
    """Raised when actual and predicted vectors differ in length."""

    def __init__(self, actual_len: int, predicted_len: int) -> None:
        super().__init__(
            f"Length mismatch: {actual_len} actual values vs {predicted_len} predictions"
        )
        self.actual_len = actual_len
        self.predicted_len = predicted_len


class EmptyInputError(MetricError):
    """Raised when a metric receives zero observations."""


class ConstantActualError(MetricError):
    """Raised when R² is requested for a constant actual vector (zero denominator)."""


class NonFiniteInputError(MetricError):
    """Raised when an input contains NaN or infinity."""


@dataclass(frozen=True)
class ScorePair:
    """Every error measure for one model on one evaluation set."""

    mae: float        # kW
    r2_ratio: float
    r2_score: float
    rmse: float       # kW
    n: int

    def as_dict(self) -> dict[str, float | int]:
        return {
            "mae": self.mae,
            "rmse": self.rmse,
            "r2_score": self.r2_score,
            "r2_ratio": self.r2_ratio,
            "n": self.n,
        }


def _pair(actual, predicted, *, min_len: int = 1) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.shape[0] != p.shape[0]:
        raise LengthMismatchError(a.shape[0], p.shape[0])
    if a.shape[0] == 0:
        raise EmptyInputError("Metrics need at least one observation")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(p))):
        raise NonFiniteInputError("Metric inputs must be finite")
    if a.shape[0] < min_len:
        raise ConstantActualError(
            f"R² needs at least {min_len} observations, got {a.shape[0]}"
        )
    return a, p


def _total_sum_of_squares(a: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(a))
    ss_tot = float(np.sum((a - mean) ** 2))
    if ss_tot == 0.0:
        raise ConstantActualError("R² is undefined when every actual value is equal")
    return mean, ss_tot


def mae(actual, predicted) -> float:
    """Mean absolute error, (1/n) Σ |y − ŷ|."""
    a, p = _pair(actual, predicted)
    return float(np.mean(np.abs(a - p)))


def rmse(actual, predicted) -> float:
    """Root mean squared error."""
    a, p = _pair(actual, predicted)
    return math.sqrt(float(np.mean((a - p) ** 2)))


def r2_ratio(actual, predicted) -> float:
    """Explained sum of squares over total sum of squares (mean of ``actual`` as ȳ)."""
    a, p = _pair(actual, predicted, min_len=2)
    mean, ss_tot = _total_sum_of_squares(a)
    return float(np.sum((p - mean) ** 2)) / ss_tot


def r2_score(actual, predicted) -> float:
    """Conventional coefficient of determination, 1 − SSres/SStot."""
    a, p = _pair(actual, predicted, min_len=2)
    _, ss_tot = _total_sum_of_squares(a)
    return 1.0 - float(np.sum((a - p) ** 2)) / ss_tot


METRICS = {
    "mae": mae,
    "rmse": rmse,
    "r2_score": r2_score,
    "r2_ratio": r2_ratio,
}


def get_metric(name: str):
    """Look up a metric function by tag."""
    try:
        return METRICS[name]
    except KeyError:
        raise MetricError(
            f"Unknown metric {name!r}; expected one of {sorted(METRICS)}"
        ) from None


def score_all(actual, predicted) -> ScorePair:
    """Compute every measure at once."""
    a, p = _pair(actual, predicted, min_len=2)
    return ScorePair(
        mae=mae(a, p),
        r2_ratio=r2_ratio(a, p),
        r2_score=r2_score(a, p),
        rmse=rmse(a, p),
        n=int(a.shape[0]),
    )


def pearson(x, y) -> float:
    """Pearson correlation coefficient; 0.0 when either input is constant."""
    a = np.asarray(x, dtype=float).ravel()
    b = np.asarray(y, dtype=float).ravel()
    if a.shape[0] != b.shape[0]:
        raise LengthMismatchError(a.shape[0], b.shape[0])
    if a.shape[0] < 2 or np.ptp(a) == 0 or np.ptp(b) == 0:
        return 0.0
    return float(np.corrcoef(a, b)[0, 1])
