"""Result tables rendered as CSV.

Numbers are printed with 4 decimals, MAE/RMSE with 2.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, Protocol

import pandas as pd

from windreg.core.metrics.scores import ScorePair
from windreg.core.report.svg import ReportError, num
from windreg.core.validation.cross_validation import CvResult
from windreg.core.validation.evaluation import EvalResult

logger = logging.getLogger(__name__)

DECIMALS = 4
ERROR_DECIMALS = 2
IMPORTANCE_TOLERANCE = 1e-4

STATS_FILE = "stats.csv"
CV_FILE = "cv.csv"
ERRORS_FILE = "errors.csv"
IMPORTANCE_FILE = "importance.csv"


class IncompleteResultsError(ReportError):
    """Raised when a table is requested without the results it summarizes."""


class ImportanceNotNormalizedError(ReportError):
    def __init__(self, column: str, total: float) -> None:
        super().__init__(f"Importance column {column!r} sums to {total:.6f}, expected 1")
        self.column = column
        self.total = total


class ScoredModel(Protocol):
    @property
    def label(self) -> str: ...

    scores: ScorePair
    hyperparameters: dict[str, Any]


class StatsRow(Protocol):
    name: str
    mean: float
    std: float
    min: float
    max: float


def check_importance_normalized(
    values: Sequence[float],
    column: str = "importance",
    tolerance: float = IMPORTANCE_TOLERANCE,
) -> None:
    """Importance shares must sum to 1 (an all-zero column is allowed)."""
    total = float(sum(values))
    if all(v == 0.0 for v in values):
        return
    if abs(total - 1.0) > tolerance:
        raise ImportanceNotNormalizedError(column, total)


def stats_table(
    stats: Sequence[StatsRow], labels: Mapping[str, str] | None = None
) -> pd.DataFrame:
    """One row per column: mean, std, min, max."""
    if not stats:
        raise IncompleteResultsError("No column statistics to tabulate")
    labels = labels or {}
    return pd.DataFrame(
        [
            {
                "column": labels.get(s.name, s.name),
                "mean": num(s.mean, DECIMALS),
                "std": num(s.std, DECIMALS),
                "min": num(s.min, DECIMALS),
                "max": num(s.max, DECIMALS),
            }
            for s in stats
        ]
    )


def cv_table(results: Sequence[CvResult]) -> pd.DataFrame:
    """Fold rows 0..k-1 then an ``Average`` row; one column per model."""
    if not results:
        raise IncompleteResultsError("No cross-validation results to tabulate")
    k = results[0].k
    if any(r.k != k for r in results):
        raise IncompleteResultsError("Cross-validation results use different fold counts")

    rows = []
    for fold in range(k):
        row = {"fold": str(fold)}
        row.update({r.spec.label: num(r.folds[fold].score, DECIMALS) for r in results})
        rows.append(row)
    average = {"fold": "Average"}
    average.update({r.spec.label: num(r.average, DECIMALS) for r in results})
    rows.append(average)
    return pd.DataFrame(rows)


def errors_table(models: Sequence[ScoredModel]) -> pd.DataFrame:
    """Errors per model, one row each in the given order."""
    if not models:
        raise IncompleteResultsError("No scored models to tabulate")
    return pd.DataFrame(
        [
            {
                "model": m.label,
                "mae_kw": num(m.scores.mae, ERROR_DECIMALS),
                "rmse_kw": num(m.scores.rmse, ERROR_DECIMALS),
                "r2_score": num(m.scores.r2_score, DECIMALS),
                "r2_ratio": num(m.scores.r2_ratio, DECIMALS),
                "n_test": m.scores.n,
                "k": m.hyperparameters.get("k", ""),
            }
            for m in models
        ]
    )


def importance_table(
    evaluation: EvalResult, labels: Mapping[str, str] | None = None
) -> pd.DataFrame:
    """Tree impurity importance and per-model permutation importance per feature."""
    labels = labels or {}
    columns: dict[str, tuple[float, ...]] = {}
    if evaluation.tree_importance is not None:
        columns["tree_impurity"] = evaluation.tree_importance.values
    for m in evaluation.models:
        if m.permutation is not None:
            columns[f"permutation_{m.label}"] = m.permutation.values
    if not columns:
        raise IncompleteResultsError("Evaluation holds no importance vectors")

    for name, values in columns.items():
        check_importance_normalized(values, name)
    frame = pd.DataFrame(
        {"feature": [labels.get(f, f) for f in evaluation.feature_names]}
        | {name: [num(v, DECIMALS) for v in values] for name, values in columns.items()}
    )
    return frame


def write_table(frame: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.debug("Wrote %s (%d rows)", path, len(frame))
    return path


def write_stats_table(
    stats: Sequence[StatsRow], path: str | Path, labels: Mapping[str, str] | None = None
) -> Path:
    return write_table(stats_table(stats, labels), path)


def write_cv_table(results: Sequence[CvResult], path: str | Path) -> Path:
    return write_table(cv_table(results), path)


def write_errors_table(evaluation: EvalResult, path: str | Path) -> Path:
    return write_table(errors_table(evaluation.models), path)


def write_importance_table(
    evaluation: EvalResult, path: str | Path, labels: Mapping[str, str] | None = None
) -> Path:
    return write_table(importance_table(evaluation, labels), path)


def emit_tables(
    out_dir: str | Path,
    *,
    stats: Sequence[StatsRow] | None,
    cv_results: Sequence[CvResult] | None,
    evaluation: EvalResult | None,
    labels: Mapping[str, str] | None = None,
) -> list[Path]:
    """Write all four tables into ``out_dir``.

    Raises:
        IncompleteResultsError: any of the three result sets is missing.
    """
    missing = [
        name
        for name, value in (("stats", stats), ("cv", cv_results), ("evaluation", evaluation))
        if not value
    ]
    if missing:
        raise IncompleteResultsError(f"Missing results: {', '.join(missing)}")
    out = Path(out_dir)
    return [
        write_stats_table(stats, out / STATS_FILE, labels),
        write_cv_table(cv_results, out / CV_FILE),
        write_errors_table(evaluation, out / ERRORS_FILE),
        write_importance_table(evaluation, out / IMPORTANCE_FILE, labels),
    ]
