"""Subcommand definitions and handlers.

Each handler takes the parsed arguments plus the active Settings and returns
an exit code. Results go to stdout or to files; diagnostics go to stderr
through logging.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from windreg import __version__
from windreg.core.cli.main import EXIT_OK, CommandParser
from windreg.core.config.settings import Settings
from windreg.core.errors import UsageError
from windreg.core.metrics.scores import METRICS, ScorePair, score_all
from windreg.core.models.tree import InvalidTreeParamsError, TreeParams
from windreg.core.profile.loader import load_profile
from windreg.core.report.bundle import (
    SCATTER_FILE,
    OverlayWindow,
    ReportBundle,
    add_overlay,
    build_report,
    fit_file_name,
)
from windreg.core.report.figures import fit_plot, scatter_matrix
from windreg.core.report.tables import (
    ERRORS_FILE,
    IMPORTANCE_FILE,
    STATS_FILE,
    cv_table,
    errors_table,
    importance_table,
    stats_table,
    write_errors_table,
    write_importance_table,
    write_table,
)
from windreg.core.storage.model_file import ModelFile, load_model, save_model
from windreg.core.validation.cross_validation import DEFAULT_CV_METRIC, CvResult, cross_validate
from windreg.core.validation.evaluation import evaluate
from windreg.core.validation.specs import (
    ALGORITHMS,
    DISPLAY_NAMES,
    RegressorSpec,
    fit_spec,
    hyperparameters,
)
from windreg.core.validation.splits import SplitConfig, kfold
from windreg.domains.wind.constants import COLUMN_LABELS, SHORT_LABELS
from windreg.domains.wind.dataset.loader import load_csv, write_csv
from windreg.domains.wind.dataset.models import Dataset
from windreg.domains.wind.dataset.stats import summarize
from windreg.domains.wind.dataset.synthetic import generate_synthetic, synth_config_from_profile
from windreg.domains.wind.profiles import default_profile_path

logger = logging.getLogger(__name__)

LOG_LEVELS = ("debug", "info", "warning", "error", "critical")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser(settings: Settings) -> CommandParser:
    """The full ``windreg`` parser; flag defaults come from ``settings``."""
    parser = CommandParser(
        prog="windreg",
        description="Wind turbine power regression: linear, kNN and decision-tree models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        choices=LOG_LEVELS,
        default=settings.log_level.lower(),
        help="diagnostics written to stderr at this level and above",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("stats", help="per-column summary statistics of a dataset")
    p.add_argument("data", type=Path, help="dataset CSV")
    p.add_argument("--out", type=Path, default=None, help="also write the table to this CSV")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--rows", type=_positive_int, default=None,
                   help="row count (profile default when omitted)")
    p.add_argument("--seed", type=int, default=None,
                   help="generator seed (profile default when omitted)")
    p.add_argument("--profile", type=Path, default=default_profile_path(),
                   help="YAML profile with column targets and power-curve settings")
    p.add_argument("--out", type=Path, required=True, help="destination CSV")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("train", help="fit one regressor on a dataset and save it")
    p.add_argument("--model", choices=ALGORITHMS, required=True, help="algorithm")
    _add_data(p)
    _add_seed(p, settings)
    _add_model_options(p, settings)
    p.add_argument("--out", type=Path, required=True, help="destination model file (JSON)")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("predict", help="predict wind power with a saved model")
    p.add_argument("--model-file", type=Path, required=True, help="model file from `train`")
    _add_data(p)
    p.add_argument("--out", type=Path, default=None,
                   help="write predictions here instead of stdout")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("evaluate", help="train/test evaluation of one or more regressors")
    _add_data(p)
    _add_models(p)
    _add_seed(p, settings)
    _add_split(p, settings)
    _add_model_options(p, settings)
    _add_repeats(p, settings)
    p.add_argument("--out", type=Path, default=None,
                   help="directory for errors.csv and importance.csv")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("cv", help="k-fold cross-validation of one or more regressors")
    _add_data(p)
    _add_models(p)
    _add_seed(p, settings)
    _add_folds(p, settings)
    p.add_argument("--metric", choices=sorted(METRICS), default=DEFAULT_CV_METRIC,
                   help="per-fold score")
    _add_model_options(p, settings)
    _add_n_jobs(p, settings)
    p.add_argument("--out", type=Path, default=None, help="also write the table to this CSV")
    p.set_defaults(handler=cmd_cv)

    p = sub.add_parser("importance", help="tree impurity and permutation importance")
    _add_data(p)
    _add_models(p)
    _add_seed(p, settings)
    _add_split(p, settings)
    _add_model_options(p, settings)
    _add_repeats(p, settings)
    p.add_argument("--out", type=Path, default=None, help="also write the table to this CSV")
    p.set_defaults(handler=cmd_importance)

    p = sub.add_parser("compare", help="full benchmark: all tables and figures")
    _add_data(p, required=False,
              help_text="dataset CSV (the default synthetic dataset when omitted)")
    _add_seed(p, settings)
    _add_split(p, settings)
    _add_folds(p, settings)
    _add_model_options(p, settings)
    _add_repeats(p, settings)
    _add_n_jobs(p, settings)
    _add_overlay(p, settings)
    p.add_argument("--out", type=Path, required=True, help="report directory")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("report", help="report figures for saved models on a dataset")
    _add_data(p)
    p.add_argument("--model-file", type=Path, action="append", required=True,
                   help="model file from `train` (repeatable)")
    _add_overlay(p, settings)
    p.add_argument("--out", type=Path, required=True, help="report directory")
    p.set_defaults(handler=cmd_report)

    return parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonzero_int(text: str) -> int:
    value = int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must not be 0")
    return value


def _add_data(
    p: argparse.ArgumentParser, required: bool = True, help_text: str = "dataset CSV"
) -> None:
    p.add_argument("--data", type=Path, required=required, default=None, help=help_text)


def _add_models(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", dest="models", choices=ALGORITHMS, action="append", default=None,
                   help="algorithm to include (repeatable; all three when omitted)")


def _add_seed(p: argparse.ArgumentParser, settings: Settings) -> None:
    p.add_argument("--seed", type=int, default=settings.seed,
                   help="master seed for splits, folds and searches (env WINDREG_SEED)")


def _add_split(p: argparse.ArgumentParser, settings: Settings) -> None:
    p.add_argument("--test-fraction", type=float, default=settings.test_fraction,
                   help="share of rows held out for testing")
    p.add_argument("--chronological", action="store_true",
                   help="hold out the last rows instead of a random sample")


def _add_folds(p: argparse.ArgumentParser, settings: Settings) -> None:
    p.add_argument("--folds", type=int, default=settings.folds, help="cross-validation folds")


def _add_n_jobs(p: argparse.ArgumentParser, settings: Settings) -> None:
    p.add_argument("--n-jobs", type=_nonzero_int, default=settings.n_jobs,
                   help="worker threads for fold evaluation (results do not depend on it)")


def _add_repeats(p: argparse.ArgumentParser, settings: Settings) -> None:
    p.add_argument("--repeats", type=int, default=settings.permutation_repeats,
                   help="shuffles per feature for permutation importance (0 disables)")


def _add_overlay(p: argparse.ArgumentParser, settings: Settings) -> None:
    p.add_argument("--overlay-start", type=int, default=0,
                   help="first overlay row; compare counts held-out rows only")
    p.add_argument("--overlay-window", type=_positive_int, default=settings.overlay_window,
                   help="rows shown in the overlay")


def _add_model_options(p: argparse.ArgumentParser, settings: Settings) -> None:
    group = p.add_argument_group("model options")
    group.add_argument("--k", type=int, default=None,
                       help="fixed neighbour count (searched by inner CV when omitted)")
    group.add_argument("--knn-max-k", type=int, default=settings.knn_max_k,
                       help="largest neighbour count searched")
    group.add_argument("--inner-folds", type=int, default=settings.knn_inner_folds,
                       help="folds used by the neighbour-count search")
    group.add_argument("--max-depth", type=int, default=None, help="tree depth limit")
    group.add_argument("--min-samples-split", type=int, default=None,
                       help="rows a node needs before it may split (2 x min-samples-leaf)")
    group.add_argument("--min-samples-leaf", type=int, default=1, help="rows every leaf keeps")
    group.add_argument("--min-impurity-decrease", type=float, default=0.0,
                       help="smallest weighted variance decrease accepted for a split")


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def spec_from_args(args: argparse.Namespace, algorithm: str) -> RegressorSpec:
    try:
        tree_params = TreeParams(
            max_depth=args.max_depth,
            min_samples_split=(
                args.min_samples_split
                if args.min_samples_split is not None
                else max(2, 2 * args.min_samples_leaf)
            ),
            min_samples_leaf=args.min_samples_leaf,
            min_impurity_decrease=args.min_impurity_decrease,
        )
    except InvalidTreeParamsError as exc:
        raise UsageError(str(exc)) from exc
    return RegressorSpec(
        algorithm,
        k=args.k if algorithm == "knn" else None,
        k_candidates=tuple(range(1, args.knn_max_k + 1)),
        inner_folds=args.inner_folds,
        tree_params=tree_params,
    )


def specs_from_args(args: argparse.Namespace) -> list[RegressorSpec]:
    return [spec_from_args(args, algorithm) for algorithm in args.models or ALGORITHMS]


def default_dataset() -> Dataset:
    profile = load_profile(default_profile_path())
    return generate_synthetic(synth_config_from_profile(profile))


def print_table(frame: pd.DataFrame) -> None:
    frame.to_csv(sys.stdout, index=False, lineterminator="\n")


def print_paths(paths: Sequence[Path]) -> None:
    for path in paths:
        print(path)


def run_cv(
    specs: Sequence[RegressorSpec], dataset: Dataset, args: argparse.Namespace
) -> list[CvResult]:
    folds = kfold(dataset.n, args.folds, args.seed)
    metric = getattr(args, "metric", DEFAULT_CV_METRIC)
    return [
        cross_validate(spec, dataset, folds, metric, seed=args.seed, n_jobs=args.n_jobs)
        for spec in specs
    ]


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

def cmd_stats(args: argparse.Namespace, settings: Settings) -> int:
    frame = stats_table(summarize(load_csv(args.data)), SHORT_LABELS)
    print_table(frame)
    if args.out is not None:
        write_table(frame, args.out)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace, settings: Settings) -> int:
    profile = load_profile(args.profile)
    dataset = generate_synthetic(synth_config_from_profile(profile, n=args.rows, seed=args.seed))
    print(write_csv(dataset, args.out))
    return EXIT_OK


def cmd_train(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_csv(args.data)
    model = fit_spec(
        spec_from_args(args, args.model),
        dataset.features,
        dataset.target,
        args.seed,
        list(dataset.feature_names),
    )
    metadata = {
        "row_count": dataset.n,
        "column_names": list(dataset.column_names),
        "seed": args.seed,
        "hyperparameters": hyperparameters(model),
    }
    print(save_model(model, args.out, metadata))
    return EXIT_OK


def cmd_predict(args: argparse.Namespace, settings: Settings) -> int:
    model_file = load_model(args.model_file)
    dataset = load_csv(args.data)
    predictions = model_file.model.predict(dataset.features)
    text = "".join(f"{float(value)!r}\n" for value in predictions)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
    logger.info("Predicted %d rows with a %s model", dataset.n, model_file.algorithm)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_csv(args.data)
    result = evaluate(
        specs_from_args(args),
        dataset,
        SplitConfig(args.test_fraction, args.seed, args.chronological),
        permutation_repeats=args.repeats,
    )
    frame = errors_table(result.models)
    print_table(frame)
    if args.out is not None:
        write_errors_table(result, args.out / ERRORS_FILE)
        if args.repeats > 0 or result.tree_importance is not None:
            write_importance_table(result, args.out / IMPORTANCE_FILE, SHORT_LABELS)
    return EXIT_OK


def cmd_cv(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_csv(args.data)
    frame = cv_table(run_cv(specs_from_args(args), dataset, args))
    print_table(frame)
    if args.out is not None:
        write_table(frame, args.out)
    return EXIT_OK


def cmd_importance(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_csv(args.data)
    result = evaluate(
        specs_from_args(args),
        dataset,
        SplitConfig(args.test_fraction, args.seed, args.chronological),
        permutation_repeats=args.repeats,
    )
    frame = importance_table(result, SHORT_LABELS)
    print_table(frame)
    if args.out is not None:
        write_table(frame, args.out)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_csv(args.data) if args.data is not None else default_dataset()
    specs = [spec_from_args(args, algorithm) for algorithm in ALGORITHMS]
    cv_results = run_cv(specs, dataset, args)
    evaluation = evaluate(
        specs,
        dataset,
        SplitConfig(args.test_fraction, args.seed, args.chronological),
        permutation_repeats=args.repeats,
    )
    bundle = build_report(
        args.out,
        dataset,
        features=dataset.features,
        actual=dataset.target,
        timestamps=dataset.timestamps,
        stats=summarize(dataset),
        evaluation=evaluation,
        cv_results=cv_results,
        overlay=OverlayWindow(args.overlay_start, args.overlay_window),
        labels=SHORT_LABELS,
        axis_labels=COLUMN_LABELS,
    )
    print_paths(bundle.write())
    return EXIT_OK


@dataclass(frozen=True)
class ScoredFile:
    """A saved model scored on every row of a dataset."""

    label: str
    display_name: str
    model_file: ModelFile
    predictions: Any
    scores: ScorePair
    hyperparameters: dict[str, Any] = field(default_factory=dict)


def score_model_files(model_files: Sequence[ModelFile], dataset: Dataset) -> list[ScoredFile]:
    """Predict with each file; repeated algorithms get numbered labels."""
    counts = {a: sum(1 for f in model_files if f.algorithm == a) for a in ALGORITHMS}
    seen: dict[str, int] = {}
    scored = []
    for model_file in model_files:
        algorithm = model_file.algorithm
        seen[algorithm] = seen.get(algorithm, 0) + 1
        label, display = algorithm, DISPLAY_NAMES[algorithm]
        if counts[algorithm] > 1:
            label = f"{algorithm}_{seen[algorithm]}"
            display = f"{display} ({seen[algorithm]})"
        predictions = model_file.model.predict(dataset.features)
        scored.append(
            ScoredFile(
                label=label,
                display_name=display,
                model_file=model_file,
                predictions=predictions,
                scores=score_all(dataset.target, predictions),
                hyperparameters=hyperparameters(model_file.model),
            )
        )
    return scored


def cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_csv(args.data)
    scored = score_model_files([load_model(path) for path in args.model_file], dataset)

    bundle = ReportBundle(out_dir=args.out)
    bundle.add_table(STATS_FILE, stats_table(summarize(dataset), SHORT_LABELS))
    bundle.add_table(ERRORS_FILE, errors_table(scored))
    bundle.add_figure(SCATTER_FILE, scatter_matrix(dataset, COLUMN_LABELS))
    add_overlay(
        bundle,
        dataset.features,
        dataset.target,
        dataset.timestamps,
        {s.display_name: s.model_file.model for s in scored},
        OverlayWindow(args.overlay_start, args.overlay_window),
    )
    for s in scored:
        bundle.add_figure(
            fit_file_name(s.label), fit_plot(dataset.target, s.predictions, s.display_name)
        )
    print_paths(bundle.write())
    return EXIT_OK
