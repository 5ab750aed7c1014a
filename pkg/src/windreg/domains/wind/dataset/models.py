"""Wind-measurement dataset and its validation errors."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from windreg.core.errors import DataError
from windreg.domains.wind.constants import (
    DATA_COLUMNS,
    DIRECTION_MAX_DEG,
    FEATURE_COLUMNS,
    PRESSURE_MIN_HPA,
    SPEED_MIN_MS,
)


class EmptyFileError(DataError):
    """Raised when a file has no header or no data rows."""


class MissingColumnError(DataError):
    def __init__(self, column: str) -> None:
        super().__init__(f"Missing required column {column!r}")
        self.column = column


class UnexpectedColumnError(DataError):
    def __init__(self, column: str) -> None:
        super().__init__(f"Unexpected column {column!r}")
        self.column = column


class NonNumericCellError(DataError):
    """Raised for a cell that is not a finite number. ``row`` is 1-based."""

    def __init__(self, row: int, column: str, value: str) -> None:
        super().__init__(f"Row {row}, column {column!r}: {value!r} is not a finite number")
        self.row = row
        self.column = column
        self.value = value


class OutOfRangeError(DataError):
    """Raised for a value outside its physical range. ``row`` is 1-based."""

    def __init__(self, row: int, column: str, value: float, allowed: str) -> None:
        super().__init__(f"Row {row}, column {column!r}: {value!r} outside {allowed}")
        self.row = row
        self.column = column
        self.value = value


class InvalidTimestampError(DataError):
    def __init__(self, row: int, value: str, reason: str = "not an ISO-8601 instant") -> None:
        super().__init__(f"Row {row}, column 'timestamp': {value!r} {reason}")
        self.row = row
        self.value = value


class InvalidDatasetError(DataError):
    """Raised when arrays handed to Dataset break its shape or value contract."""


# Allowed interval per feature column, as (predicate, description).
_RANGES = {
    "barometric_pressure_hpa": (lambda v: v > PRESSURE_MIN_HPA, f"({PRESSURE_MIN_HPA:g}, inf)"),
    "wind_direction_deg": (
        lambda v: (v >= 0.0) & (v < DIRECTION_MAX_DEG),
        f"[0, {DIRECTION_MAX_DEG:g})",
    ),
    "wind_speed_ms": (lambda v: v >= SPEED_MIN_MS, f"[{SPEED_MIN_MS:g}, inf)"),
}


@dataclass(frozen=True)
class Dataset:
    """n rows of four meteorological features and wind power.

    Arrays are copied and made read-only, so a Dataset can be shared freely.
    """

    features: np.ndarray                       # n×4, FEATURE_COLUMNS order
    target: np.ndarray                         # wind power, kW
    timestamps: tuple[datetime, ...] | None = None
    column_names: tuple[str, ...] = DATA_COLUMNS

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=float)
        target = np.array(self.target, dtype=float).ravel()
        if features.ndim != 2 or features.shape[1] != len(FEATURE_COLUMNS):
            raise InvalidDatasetError(
                f"Features must be an n×{len(FEATURE_COLUMNS)} matrix, got shape {features.shape}"
            )
        if features.shape[0] < 1:
            raise InvalidDatasetError("A dataset needs at least one row")
        if target.shape[0] != features.shape[0]:
            raise InvalidDatasetError(
                f"{features.shape[0]} feature rows but {target.shape[0]} target values"
            )
        if tuple(self.column_names) != DATA_COLUMNS:
            raise InvalidDatasetError(f"Column names must be {DATA_COLUMNS}")
        _check_values(features, target)

        timestamps = None
        if self.timestamps is not None:
            timestamps = tuple(self.timestamps)
            _check_timestamps(timestamps, features.shape[0])

        features.setflags(write=False)
        target.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def n(self) -> int:
        return int(self.features.shape[0])

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.column_names[: len(FEATURE_COLUMNS)]

    @property
    def target_name(self) -> str:
        return self.column_names[-1]

    def column(self, name: str) -> np.ndarray:
        """Values of one feature or the target, by column name."""
        if name == self.target_name:
            return self.target
        try:
            return self.features[:, self.feature_names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def subset(self, rows: Sequence[int] | np.ndarray) -> Dataset:
        """Rows in the given order; timestamps kept only when still increasing."""
        index = np.asarray(rows, dtype=int)
        timestamps = None
        if self.timestamps is not None and np.all(np.diff(index) > 0):
            timestamps = tuple(self.timestamps[i] for i in index)
        return Dataset(
            features=self.features[index],
            target=self.target[index],
            timestamps=timestamps,
        )


def _check_values(features: np.ndarray, target: np.ndarray) -> None:
    bad = ~np.isfinite(np.column_stack([features, target]))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise InvalidDatasetError(
            f"Row {row + 1}, column {DATA_COLUMNS[col]!r} is not finite"
        )

    # First violation in row-major order.
    violations = np.zeros(features.shape, dtype=bool)
    for j, name in enumerate(FEATURE_COLUMNS):
        if name in _RANGES:
            check, _ = _RANGES[name]
            violations[:, j] = ~check(features[:, j])
    if violations.any():
        row, col = np.argwhere(violations)[0]
        name = FEATURE_COLUMNS[col]
        raise OutOfRangeError(int(row) + 1, name, float(features[row, col]), _RANGES[name][1])


def _check_timestamps(timestamps: tuple[datetime, ...], n: int) -> None:
    if len(timestamps) != n:
        raise InvalidDatasetError(f"{len(timestamps)} timestamps for {n} rows")
    for i in range(1, n):
        try:
            later = timestamps[i] > timestamps[i - 1]
        except TypeError:
            raise InvalidTimestampError(
                i + 1, timestamps[i].isoformat(), "mixes naive and timezone-aware instants"
            ) from None
        if not later:
            raise InvalidTimestampError(
                i + 1, timestamps[i].isoformat(), "is not later than the previous row"
            )
