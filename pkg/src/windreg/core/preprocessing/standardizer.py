"""Per-feature z-score scaling used by the distance-based regressor."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from windreg.core.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

# Replacement scale for constant columns: they standardize to 0 and add
# nothing to Euclidean distances.
ZERO_SCALE_REPLACEMENT = 1.0


@dataclass(frozen=True)
class Standardizer:
    """Column centers (means) and scales (sample stds, zero replaced by 1)."""

    center: np.ndarray
    scale: np.ndarray

    def __post_init__(self) -> None:
        center = np.array(self.center, dtype=float)
        scale = np.array(self.scale, dtype=float)
        if center.ndim != 1 or center.shape != scale.shape:
            raise ValueError("center and scale must be 1-D arrays of equal length")
        if not np.all(np.isfinite(scale)) or np.any(scale <= 0):
            raise ValueError("scale values must be finite and positive")
        center.setflags(write=False)
        scale.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "scale", scale)

    @property
    def n_features(self) -> int:
        return int(self.center.shape[0])

    @classmethod
    def identity(cls, n_features: int) -> Standardizer:
        """A standardizer that leaves values unchanged."""
        return cls(center=np.zeros(n_features), scale=np.ones(n_features))

    def transform(self, features: np.ndarray) -> np.ndarray:
        """Return ``(features - center) / scale``; accepts one row or a matrix."""
        values = np.asarray(features, dtype=float)
        self._check(values)
        return (values - self.center) / self.scale

    def inverse_transform(self, standardized: np.ndarray) -> np.ndarray:
        """Undo :meth:`transform`."""
        values = np.asarray(standardized, dtype=float)
        self._check(values)
        return values * self.scale + self.center

    def _check(self, values: np.ndarray) -> None:
        width = values.shape[-1] if values.ndim else 0
        if values.ndim not in (1, 2) or width != self.n_features:
            raise DimensionMismatchError(self.n_features, width)


def fit_standardizer(features: np.ndarray) -> Standardizer:
    """Fit column means and sample standard deviations (n-1 divisor).

    Columns with zero spread (including every column when n = 1) get scale 1.
    """
    matrix = np.asarray(features, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] < 1:
        raise ValueError("fit_standardizer needs an n×p matrix with n >= 1")

    center = matrix.mean(axis=0)
    if matrix.shape[0] > 1:
        scale = matrix.std(axis=0, ddof=1)
    else:
        scale = np.zeros(matrix.shape[1])

    constant = (np.ptp(matrix, axis=0) == 0) | ~(scale > 0)
    if np.any(constant):
        logger.debug("Constant columns %s get unit scale", np.flatnonzero(constant).tolist())
        scale = np.where(constant, ZERO_SCALE_REPLACEMENT, scale)
    return Standardizer(center=center, scale=scale)
