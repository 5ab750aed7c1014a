"""Figure builders: scatter matrix, prediction overlay and fit plots.

Every builder returns an SVG document as text. Layouts are fixed and nothing
time-dependent is embedded, so identical inputs give identical bytes.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from datetime import datetime
from typing import Protocol

import numpy as np

from windreg.core.metrics.scores import LengthMismatchError, pearson, r2_score
from windreg.core.report.svg import (
    PALETTE,
    EmptyDatasetError,
    LinearScale,
    num,
    render,
    thin,
    ticks,
)

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 20
MAX_CELL_POINTS = 1500
DEFAULT_OVERLAY_WINDOW = 144  # one day of 10-minute records


class ColumnTable(Protocol):
    @property
    def column_names(self) -> tuple[str, ...]: ...

    def column(self, name: str) -> np.ndarray: ...


def scatter_matrix(
    table: ColumnTable,
    labels: Mapping[str, str] | None = None,
    *,
    cell_size: int = 120,
    max_points: int = MAX_CELL_POINTS,
) -> str:
    """Grid of pairwise scatter plots with per-column histograms on the diagonal.

    Off-diagonal cell (row i, column j) plots column j across and column i up,
    annotated with their Pearson r over all rows.
    """
    labels = labels or {}
    names = list(table.column_names)
    columns = [np.asarray(table.column(name), dtype=float) for name in names]
    n = columns[0].shape[0]
    if n < 2:
        raise EmptyDatasetError(f"A scatter matrix needs at least 2 rows, got {n}")

    pad, gap = 6.0, 8.0
    left, top = 76.0, 24.0
    inner = cell_size - 2 * pad
    # Cell-local scales: x across, y inverted so larger values sit higher.
    x_scales = [LinearScale.fit(c, pad, pad + inner) for c in columns]
    y_scales = [LinearScale.fit(c, pad + inner, pad) for c in columns]
    sample = thin(n, max_points)

    cells = []
    for i, row_values in enumerate(columns):
        for j, col_values in enumerate(columns):
            cell = {
                "row": i,
                "col": j,
                "x": num(left + j * (cell_size + gap)),
                "y": num(top + i * (cell_size + gap)),
            }
            if i == j:
                cell["kind"] = "histogram"
                cell["bars"] = _histogram_bars(row_values, x_scales[i], pad, inner)
            else:
                cxs = x_scales[j](col_values[sample])
                cys = y_scales[i](row_values[sample])
                cell["kind"] = "scatter"
                cell["points"] = [(num(cx), num(cy)) for cx, cy in zip(cxs, cys, strict=True)]
                cell["pearson"] = num(pearson(col_values, row_values))
            cells.append(cell)

    grid = len(names) * cell_size + (len(names) - 1) * gap
    axis_labels = [
        {
            "text": labels.get(name, name),
            "x": num(left + k * (cell_size + gap) + cell_size / 2),
            "y": num(top + k * (cell_size + gap) + cell_size / 2),
        }
        for k, name in enumerate(names)
    ]
    return render(
        "scatter_matrix.svg.j2",
        width=num(left + grid + 12, 0),
        height=num(top + grid + 44, 0),
        size=cell_size,
        cells=cells,
        labels=axis_labels,
        bottom=num(top + grid + 28),
        left_label_x=num(left - 14),
        title="Scatter matrix",
    )


def _histogram_bars(values: np.ndarray, scale: LinearScale, pad: float, inner: float) -> list:
    counts, edges = np.histogram(values, bins=HISTOGRAM_BINS, range=(scale.lo, scale.hi))
    peak = max(int(counts.max()), 1)
    bars = []
    for count, lo, hi in zip(counts, edges[:-1], edges[1:], strict=True):
        height = inner * count / peak
        x0, x1 = scale(lo), scale(hi)
        bars.append(
            {
                "x": num(x0),
                "y": num(pad + inner - height),
                "width": num(x1 - x0),
                "height": num(height),
                "count": int(count),
            }
        )
    return bars


def overlay_plot(
    timestamps: Sequence[datetime] | None,
    actual,
    predictions: Mapping[str, np.ndarray],
    *,
    start: int = 0,
    window: int | None = DEFAULT_OVERLAY_WINDOW,
    actual_label: str = "Actual",
    unit: str = "kW",
) -> str:
    """Actual series plus one polyline per model over a contiguous window.

    ``window=None`` plots everything from ``start``.
    """
    actual = np.asarray(actual, dtype=float).ravel()
    series = {actual_label: actual}
    for name, values in predictions.items():
        values = np.asarray(values, dtype=float).ravel()
        if values.shape[0] != actual.shape[0]:
            raise LengthMismatchError(actual.shape[0], values.shape[0])
        series[name] = values
    if timestamps is not None and len(timestamps) != actual.shape[0]:
        raise LengthMismatchError(actual.shape[0], len(timestamps))

    stop = actual.shape[0] if window is None else min(start + window, actual.shape[0])
    if stop - start < 2:
        shown = max(stop - start, 0)
        raise EmptyDatasetError(f"An overlay needs at least 2 points, got {shown}")
    rows = np.arange(start, stop)

    width, height = 900.0, 360.0
    left, right, top, bottom = 70.0, 20.0, 24.0, 64.0
    plot_bottom = height - bottom
    stacked = np.concatenate([values[rows] for values in series.values()])
    sx = LinearScale(lo=float(rows[0]), hi=float(rows[-1]), start=left, end=width - right)
    sy = LinearScale.fit(stacked, plot_bottom, top)

    paths = []
    for k, (name, values) in enumerate(series.items()):
        xs, ys = sx(rows), sy(values[rows])
        commands = [
            f"{'M' if idx == 0 else 'L'}{num(x)},{num(y)}"
            for idx, (x, y) in enumerate(zip(xs, ys, strict=True))
        ]
        paths.append(
            {"name": name, "color": PALETTE[k % len(PALETTE)], "d": " ".join(commands)}
        )

    step = max((stop - start) // 6, 1)
    x_ticks = []
    for row in range(start, stop, step):
        text = timestamps[row].strftime("%H:%M") if timestamps is not None else str(row)
        x_ticks.append({"x": num(float(sx(row))), "text": text})
    y_ticks = [{"y": num(float(sy(v))), "text": num(v, 0)} for v in ticks(sy.lo, sy.hi)]

    return render(
        "overlay.svg.j2",
        width=num(width, 0),
        height=num(height, 0),
        left=num(left),
        right=num(width - right),
        top=num(top),
        bottom=num(plot_bottom),
        paths=paths,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        unit=unit,
        legend_y=num(height - 18),
        title="Prediction overlay",
    )


def fit_plot(actual, predicted, model_name: str, *, max_points: int = MAX_CELL_POINTS) -> str:
    """Predicted against actual with the y = x reference line and R² annotation."""
    actual = np.asarray(actual, dtype=float).ravel()
    predicted = np.asarray(predicted, dtype=float).ravel()
    if actual.shape[0] != predicted.shape[0]:
        raise LengthMismatchError(actual.shape[0], predicted.shape[0])
    if actual.shape[0] < 2:
        raise EmptyDatasetError("A fit plot needs at least 2 points")
    score = r2_score(actual, predicted)

    size, margin = 420.0, 56.0
    both = np.concatenate([actual, predicted])
    sx = LinearScale.fit(both, margin, size - 16)
    sy = LinearScale(lo=sx.lo, hi=sx.hi, start=size - margin, end=16.0)
    sample = thin(actual.shape[0], max_points)
    points = [
        (num(x), num(y))
        for x, y in zip(sx(actual[sample]), sy(predicted[sample]), strict=True)
    ]
    axis_ticks = [
        {"x": num(float(sx(v))), "y": num(float(sy(v))), "text": num(v, 0)}
        for v in ticks(sx.lo, sx.hi)
    ]
    return render(
        "fit_plot.svg.j2",
        size=num(size, 0),
        margin=num(margin),
        far=num(size - 16),
        near=num(16.0),
        base=num(size - margin),
        points=points,
        line={
            "x1": num(float(sx(sx.lo))),
            "y1": num(float(sy(sx.lo))),
            "x2": num(float(sx(sx.hi))),
            "y2": num(float(sy(sx.hi))),
        },
        ticks=axis_ticks,
        annotation=f"R² = {round(score, 3) + 0.0:.3f}",
        model_name=model_name,
    )
