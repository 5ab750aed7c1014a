"""Per-column summary statistics."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from windreg.domains.wind.dataset.models import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColumnStats:
    name: str
    mean: float
    std: float          # sample std (n-1 divisor)
    min: float
    max: float
    std_undefined: bool = False  # n = 1: std reported as 0

    def as_row(self) -> tuple[float, float, float, float]:
        return (self.mean, self.std, self.min, self.max)


def summarize(dataset: Dataset) -> list[ColumnStats]:
    """Mean, sample std, min and max for each feature and the target, in column order."""
    n = dataset.n
    if n == 1:
        logger.warning("Single-row dataset: standard deviations reported as 0")

    stats = []
    for name in dataset.column_names:
        # Sorted, so the reductions do not depend on row order.
        values = np.sort(dataset.column(name))
        low, high = float(values.min()), float(values.max())
        # Clamp so rounding in the mean never leaves [min, max].
        mean = min(max(float(values.mean()), low), high)
        std = 0.0 if n == 1 or low == high else float(values.std(ddof=1))
        stats.append(
            ColumnStats(name=name, mean=mean, std=std, min=low, max=high, std_undefined=n == 1)
        )
    return stats

