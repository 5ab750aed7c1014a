"""End-to-end runs of the windreg command line."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from windreg.core.cli.main import EXIT_OK, run
from windreg.core.storage.model_file import load_model
from windreg.domains.wind.constants import COLUMN_LABELS
from windreg.domains.wind.dataset.loader import load_csv

FAST = ["--knn-max-k", "6", "--inner-folds", "3"]

REPORT_FILES = {
    "cv.csv",
    "errors.csv",
    "importance.csv",
    "stats.csv",
    "scatter_matrix.svg",
    "overlay.svg",
    "fit_linear.svg",
    "fit_knn.svg",
    "fit_tree.svg",
}


def _ok(capsys, *argv: str) -> str:
    """Run a command that must succeed and return its stdout."""
    code = run(list(argv))
    captured = capsys.readouterr()
    assert code == EXIT_OK, captured.err
    return captured.out


@pytest.fixture
def data_csv(tmp_path, capsys) -> Path:
    out = _ok(capsys, "synth", "--rows", "240", "--seed", "5", "--out", str(tmp_path / "d.csv"))
    return Path(out.strip())


def test_synth_writes_requested_rows(data_csv):
    """synth should write a loadable dataset with the requested size."""
    dataset = load_csv(data_csv)
    assert dataset.n == 240
    assert dataset.timestamps is not None


def test_synth_is_reproducible(tmp_path, capsys, data_csv):
    """The same seed should produce the same file bytes."""
    again = tmp_path / "again.csv"
    _ok(capsys, "synth", "--rows", "240", "--seed", "5", "--out", str(again))
    assert again.read_bytes() == data_csv.read_bytes()


def test_stats_prints_table(data_csv, tmp_path, capsys):
    """stats should print one CSV row per column and mirror it to --out."""
    out = _ok(capsys, "stats", str(data_csv), "--out", str(tmp_path / "stats.csv"))
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ["column", "mean", "std", "min", "max"]
    assert frame["column"].tolist()[-1] == "Wind Power"
    assert (tmp_path / "stats.csv").read_text() == out


@pytest.mark.parametrize("model", ["linear", "knn", "tree"])
def test_train_then_predict(model, data_csv, tmp_path, capsys):
    """A trained model file should reproduce its predictions through predict."""
    model_path = tmp_path / f"{model}.json"
    _ok(capsys, "train", "--model", model, "--data", str(data_csv), "--out", str(model_path),
        *FAST)
    saved = load_model(model_path)
    assert saved.algorithm == model
    assert saved.metadata["row_count"] == 240
    assert saved.metadata["seed"] == 42

    out = _ok(capsys, "predict", "--model-file", str(model_path), "--data", str(data_csv))
    printed = np.array([float(line) for line in out.splitlines()])
    expected = saved.model.predict(load_csv(data_csv).features)
    np.testing.assert_array_equal(printed, expected)


def test_predict_to_file(data_csv, tmp_path, capsys):
    """predict --out should write the predictions instead of printing them."""
    model_path = tmp_path / "linear.json"
    _ok(capsys, "train", "--model", "linear", "--data", str(data_csv), "--out", str(model_path))
    target = tmp_path / "pred" / "p.txt"
    out = _ok(capsys, "predict", "--model-file", str(model_path), "--data", str(data_csv),
              "--out", str(target))
    assert out == ""
    assert len(target.read_text().splitlines()) == 240


def test_evaluate_writes_tables(data_csv, tmp_path, capsys):
    """evaluate should print the error table and write both CSV files."""
    out = _ok(capsys, "evaluate", "--data", str(data_csv), "--repeats", "2",
              "--out", str(tmp_path / "eval"), *FAST)
    errors = pd.read_csv(io.StringIO(out))
    assert errors["model"].tolist() == ["linear", "knn", "tree"]
    assert (errors["n_test"] == 48).all()
    assert (tmp_path / "eval" / "errors.csv").is_file()
    importance = pd.read_csv(tmp_path / "eval" / "importance.csv")
    assert importance["tree_impurity"].sum() == pytest.approx(1.0, abs=2e-4)


def test_cv_table(data_csv, capsys):
    """cv should print one row per fold plus the average."""
    out = _ok(capsys, "cv", "--data", str(data_csv), "--model", "linear", "--model", "tree",
              "--folds", "4")
    frame = pd.read_csv(io.StringIO(out), dtype=str)
    assert list(frame.columns) == ["fold", "linear", "tree"]
    assert frame["fold"].tolist() == ["0", "1", "2", "3", "Average"]


def test_importance_table(data_csv, capsys):
    """importance should rank wind speed first for the tree."""
    out = _ok(capsys, "importance", "--data", str(data_csv), "--model", "tree",
              "--repeats", "3")
    frame = pd.read_csv(io.StringIO(out)).set_index("feature")
    assert frame["tree_impurity"].idxmax() == "Wind Speed"
    assert frame["permutation_tree"].idxmax() == "Wind Speed"


def test_compare_writes_full_report(data_csv, tmp_path, capsys):
    """compare should write every table and figure and list them on stdout."""
    report = tmp_path / "report"
    out = _ok(capsys, "compare", "--data", str(data_csv), "--folds", "4", "--repeats", "2",
              "--out", str(report), *FAST)
    assert {Path(line).name for line in out.splitlines()} == REPORT_FILES
    assert {p.name for p in report.iterdir()} == REPORT_FILES
    errors = pd.read_csv(report / "errors.csv")
    assert errors["model"].tolist() == ["linear", "knn", "tree"]
    assert {"mae_kw", "r2_score", "r2_ratio"} <= set(errors.columns)
    scatter = (report / "scatter_matrix.svg").read_text(encoding="utf-8")
    for label in COLUMN_LABELS.values():
        assert f">{label}<" in scatter


def test_compare_is_deterministic_across_threads(data_csv, tmp_path, capsys):
    """Repeated runs, with any thread count, should give identical bytes."""
    dirs = []
    for name, jobs in (("a", "1"), ("b", "1"), ("c", "2")):
        dirs.append(tmp_path / name)
        _ok(capsys, "compare", "--data", str(data_csv), "--folds", "4", "--repeats", "2",
            "--n-jobs", jobs, "--out", str(dirs[-1]), *FAST)
    for name in REPORT_FILES:
        first = (dirs[0] / name).read_bytes()
        assert (dirs[1] / name).read_bytes() == first, name
        assert (dirs[2] / name).read_bytes() == first, name


def test_report_from_saved_models(data_csv, tmp_path, capsys):
    """report should score saved models and number repeated algorithms."""
    paths = []
    for name, extra in (("a", ["--max-depth", "3"]), ("b", []), ("c", [])):
        model = "linear" if name == "c" else "tree"
        paths.append(tmp_path / f"{name}.json")
        _ok(capsys, "train", "--model", model, "--data", str(data_csv),
            "--out", str(paths[-1]), *extra)

    report = tmp_path / "saved"
    argv = ["report", "--data", str(data_csv), "--out", str(report)]
    for path in paths:
        argv += ["--model-file", str(path)]
    _ok(capsys, *argv)
    assert {p.name for p in report.iterdir()} == {
        "stats.csv",
        "errors.csv",
        "scatter_matrix.svg",
        "overlay.svg",
        "fit_tree_1.svg",
        "fit_tree_2.svg",
        "fit_linear.svg",
    }
    errors = pd.read_csv(report / "errors.csv")
    assert errors["model"].tolist() == ["tree_1", "tree_2", "linear"]
    assert (errors["n_test"] == 240).all()


def test_bad_data_exit_code(tmp_path, capsys):
    """A malformed data file should exit with the data error code."""
    bad = tmp_path / "bad.csv"
    bad.write_text("wind_speed_ms,wind_power_kw\n5.0,100.0\n")
    assert run(["stats", str(bad)]) == 3
    assert "Missing required column" in capsys.readouterr().err
