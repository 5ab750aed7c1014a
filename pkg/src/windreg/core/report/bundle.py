"""A complete report: tables and figures written into one directory."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

from windreg.core.models.base import Regressor
from windreg.core.report import tables as report_tables
from windreg.core.report.figures import (
    DEFAULT_OVERLAY_WINDOW,
    ColumnTable,
    fit_plot,
    overlay_plot,
    scatter_matrix,
)
from windreg.core.validation.cross_validation import CvResult
from windreg.core.validation.evaluation import EvalResult

logger = logging.getLogger(__name__)

SCATTER_FILE = "scatter_matrix.svg"
OVERLAY_FILE = "overlay.svg"


def fit_file_name(label: str) -> str:
    return f"fit_{label}.svg"


@dataclass
class ReportBundle:
    """Named tables (CSV) and figures (SVG) destined for ``out_dir``."""

    out_dir: Path
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    figures: dict[str, str] = field(default_factory=dict)

    def add_table(self, name: str, frame: pd.DataFrame) -> None:
        self.tables[name] = frame

    def add_figure(self, name: str, document: str) -> None:
        self.figures[name] = document

    def write(self) -> list[Path]:
        """Write every document in name order; returns the paths written."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name in sorted(self.tables):
            written.append(report_tables.write_table(self.tables[name], self.out_dir / name))
        for name in sorted(self.figures):
            path = self.out_dir / name
            path.write_text(self.figures[name], encoding="utf-8")
            written.append(path)
        logger.info("Wrote %d report files to %s", len(written), self.out_dir)
        return written


@dataclass(frozen=True)
class OverlayWindow:
    start: int = 0
    length: int = DEFAULT_OVERLAY_WINDOW


def add_overlay(
    bundle: ReportBundle,
    features: np.ndarray,
    actual: np.ndarray,
    timestamps: Sequence[datetime] | None,
    models: Mapping[str, Regressor],
    window: OverlayWindow,
    rows: np.ndarray | None = None,
) -> np.ndarray:
    """Predict a window of ``rows`` with each model and plot it against ``actual``.

    ``rows`` are the eligible row indices (every row when omitted); they are
    taken in ascending order and ``window`` selects a run of them. Returns the
    row indices shown.
    """
    eligible = np.arange(actual.shape[0]) if rows is None else np.sort(np.asarray(rows))
    shown = eligible[window.start:window.start + window.length]
    predictions = {label: model.predict(features[shown]) for label, model in models.items()}
    bundle.add_figure(
        OVERLAY_FILE,
        overlay_plot(
            None if timestamps is None else [timestamps[i] for i in shown],
            actual[shown],
            predictions,
            window=None,
        ),
    )
    return shown


def build_report(
    out_dir: str | Path,
    data: ColumnTable,
    *,
    features: np.ndarray,
    actual: np.ndarray,
    timestamps: Sequence[datetime] | None,
    stats: Sequence[report_tables.StatsRow],
    evaluation: EvalResult,
    cv_results: Sequence[CvResult],
    overlay: OverlayWindow | None = None,
    labels: Mapping[str, str] | None = None,
    axis_labels: Mapping[str, str] | None = None,
) -> ReportBundle:
    """Everything the full benchmark produces: four tables and the figures.

    ``labels`` name columns in the tables; ``axis_labels`` (falling back to
    ``labels``) name the scatter-matrix axes and should carry units.
    """
    bundle = ReportBundle(out_dir=Path(out_dir))
    bundle.add_table(report_tables.STATS_FILE, report_tables.stats_table(stats, labels))
    bundle.add_table(report_tables.CV_FILE, report_tables.cv_table(cv_results))
    bundle.add_table(report_tables.ERRORS_FILE, report_tables.errors_table(evaluation.models))
    bundle.add_table(
        report_tables.IMPORTANCE_FILE, report_tables.importance_table(evaluation, labels)
    )

    bundle.add_figure(SCATTER_FILE, scatter_matrix(data, axis_labels or labels))
    add_overlay(
        bundle,
        features,
        actual,
        timestamps,
        {m.spec.display_name: m.model for m in evaluation.models},
        overlay or OverlayWindow(),
        rows=evaluation.split.test,
    )
    y_test = actual[evaluation.split.test]
    for m in evaluation.models:
        bundle.add_figure(
            fit_file_name(m.label), fit_plot(y_test, m.predictions, m.spec.display_name)
        )
    return bundle
