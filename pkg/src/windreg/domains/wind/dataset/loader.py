"""CSV ingestion and export in the canonical wind-measurement layout.

Header columns (comma-separated, '.' decimal point, ``timestamp`` optional)::

    timestamp, air_temperature_c, barometric_pressure_hpa,
    wind_direction_deg, wind_speed_ms, wind_power_kw

Columns are matched by name. Rows in error messages are 1-based data rows
(the header is not counted).
"""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

from windreg.core.errors import DataError
from windreg.domains.wind.constants import (
    CSV_HEADER,
    DATA_COLUMNS,
    FEATURE_COLUMNS,
    TARGET_COLUMN,
    TIMESTAMP_COLUMN,
)
from windreg.domains.wind.dataset.models import (
    Dataset,
    EmptyFileError,
    InvalidTimestampError,
    MissingColumnError,
    NonNumericCellError,
    UnexpectedColumnError,
)

logger = logging.getLogger(__name__)


def load_csv(path: str | Path) -> Dataset:
    """Read and validate a dataset; row order is preserved.

    Raises:
        EmptyFileError: no header or no data rows.
        MissingColumnError / UnexpectedColumnError: header does not match.
        NonNumericCellError: first unparseable or non-finite cell (row-major).
        InvalidTimestampError: unparseable or non-increasing timestamp.
        OutOfRangeError: first physically impossible value (row-major).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"No such data file: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise EmptyFileError(f"{path} is empty") from None

    header = [str(c).strip() for c in frame.columns]
    frame.columns = header
    for column in header:
        if column not in CSV_HEADER:
            raise UnexpectedColumnError(column)
    for column in DATA_COLUMNS:
        if column not in header:
            raise MissingColumnError(column)
    if frame.empty:
        raise EmptyFileError(f"{path} has a header but no data rows")

    raw = frame[list(DATA_COLUMNS)]
    parsed = raw.apply(lambda s: pd.to_numeric(s.str.strip(), errors="coerce"))
    values = parsed.to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise NonNumericCellError(int(row) + 1, DATA_COLUMNS[col], str(raw.iat[row, col]))

    timestamps = None
    if TIMESTAMP_COLUMN in header:
        timestamps = tuple(
            _parse_timestamp(i + 1, text) for i, text in enumerate(frame[TIMESTAMP_COLUMN])
        )

    dataset = Dataset(
        features=values[:, : len(FEATURE_COLUMNS)],
        target=values[:, DATA_COLUMNS.index(TARGET_COLUMN)],
        timestamps=timestamps,
    )
    logger.info("Loaded %d rows from %s", dataset.n, path)
    return dataset


def write_csv(dataset: Dataset, path: str | Path) -> Path:
    """Write ``dataset`` in the canonical layout."""
    path = Path(path)
    columns: dict[str, object] = {}
    if dataset.timestamps is not None:
        columns[TIMESTAMP_COLUMN] = [t.isoformat() for t in dataset.timestamps]
    for j, name in enumerate(FEATURE_COLUMNS):
        columns[name] = dataset.features[:, j]
    columns[TARGET_COLUMN] = dataset.target

    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(columns).to_csv(path, index=False, lineterminator="\n")
    logger.debug("Wrote %d rows to %s", dataset.n, path)
    return path


def _parse_timestamp(row: int, text: str) -> datetime:
    try:
        return datetime.fromisoformat(text.strip())
    except ValueError:
        raise InvalidTimestampError(row, text) from None
