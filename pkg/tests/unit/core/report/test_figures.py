"""Tests for the SVG figure builders."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tests.conftest import make_dataset
from windreg.core.metrics.scores import LengthMismatchError, r2_score
from windreg.core.report.figures import fit_plot, overlay_plot, scatter_matrix
from windreg.core.report.svg import SVG_NAMESPACE, EmptyDatasetError
from windreg.domains.wind.constants import COLUMN_LABELS

NS = {"svg": SVG_NAMESPACE}


def parse(document: str) -> ET.Element:
    return ET.fromstring(document.encode("utf-8"))


def cells(root: ET.Element, kind: str) -> list[ET.Element]:
    return [g for g in root.iter(f"{{{SVG_NAMESPACE}}}g") if g.get("class") == f"cell {kind}"]


class TestScatterMatrix:
    def test_grid_layout(self, small_dataset):
        root = parse(scatter_matrix(small_dataset, COLUMN_LABELS))
        assert root.tag == f"{{{SVG_NAMESPACE}}}svg"
        assert len(cells(root, "histogram")) == 5
        assert len(cells(root, "scatter")) == 20
        labels = {t.text for t in root.iter(f"{{{SVG_NAMESPACE}}}text")
                  if t.get("class") == "column-label"}
        assert labels == set(COLUMN_LABELS.values())
        units = ("(°C)", "(hPa)", "(°)", "(m/s)", "(kW)")
        assert all(any(label.endswith(u) for u in units) for label in labels)

    def test_points_thinned(self, small_dataset):
        root = parse(scatter_matrix(small_dataset, max_points=50))
        for cell in cells(root, "scatter"):
            assert 0 < len(cell.findall("svg:circle", NS)) <= 50

    def test_all_points_when_small(self, small_dataset):
        root = parse(scatter_matrix(small_dataset))
        cell = cells(root, "scatter")[0]
        assert len(cell.findall("svg:circle", NS)) == small_dataset.n

    def test_histogram_counts_cover_rows(self, small_dataset):
        root = parse(scatter_matrix(small_dataset))
        for cell in cells(root, "histogram"):
            counts = [int(bar.get("data-count")) for bar in cell.findall("svg:rect", NS)
                      if bar.get("class") == "bar"]
            assert sum(counts) == small_dataset.n

    def test_power_follows_speed(self, small_dataset):
        root = parse(scatter_matrix(small_dataset))
        # row 4 is wind power, column 3 wind speed
        cell = next(c for c in cells(root, "scatter")
                    if c.get("data-row") == "4" and c.get("data-col") == "3")
        text = cell.find("svg:text", NS).text
        assert float(text.removeprefix("r = ")) > 0.8

    def test_deterministic(self, small_dataset):
        assert scatter_matrix(small_dataset) == scatter_matrix(small_dataset)

    def test_needs_two_rows(self):
        single = make_dataset([[4.0, 1000.0, 200.0, 8.0]], [500.0])
        with pytest.raises(EmptyDatasetError):
            scatter_matrix(single)


class TestOverlayPlot:
    def test_one_path_per_series(self):
        actual = np.linspace(0.0, 100.0, 30)
        root = parse(overlay_plot(None, actual, {"Linear": actual + 5, "Tree": actual - 5},
                                  window=10))
        paths = root.findall("svg:path", NS)
        assert [p.get("data-series") for p in paths] == ["Actual", "Linear", "Tree"]
        for path in paths:
            assert len(re.findall(r"[ML]", path.get("d"))) == 10
            assert path.get("d").startswith("M")

    def test_start_offset_and_whole_series(self):
        actual = np.arange(20.0)
        root = parse(overlay_plot(None, actual, {}, start=5, window=None))
        (path,) = root.findall("svg:path", NS)
        assert len(re.findall(r"[ML]", path.get("d"))) == 15

    def test_timestamp_ticks(self, small_dataset):
        document = overlay_plot(
            small_dataset.timestamps, small_dataset.target, {}, window=144
        )
        ticks = [t.text for t in parse(document).iter(f"{{{SVG_NAMESPACE}}}text")
                 if t.get("class") == "tick x"]
        assert ticks[0] == "00:00"
        assert all(re.fullmatch(r"\d\d:\d\d", t) for t in ticks)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            overlay_plot(None, np.arange(10.0), {"Linear": np.arange(9.0)})

    def test_window_past_end(self):
        with pytest.raises(EmptyDatasetError):
            overlay_plot(None, np.arange(10.0), {}, start=9)


class TestFitPlot:
    def test_annotation_matches_score(self):
        rng = np.random.default_rng(3)
        actual = rng.uniform(0.0, 2000.0, 300)
        predicted = actual + rng.normal(0.0, 150.0, 300)
        root = parse(fit_plot(actual, predicted, "Linear Regression"))
        annotation = next(t.text for t in root.iter(f"{{{SVG_NAMESPACE}}}text")
                          if t.get("class") == "annotation")
        shown = float(annotation.removeprefix("R² = "))
        assert abs(shown - r2_score(actual, predicted)) <= 5e-4

    def test_reference_line_is_diagonal(self):
        actual = np.array([0.0, 10.0, 20.0])
        root = parse(fit_plot(actual, actual, "Tree"))
        line = next(e for e in root.iter(f"{{{SVG_NAMESPACE}}}line")
                    if e.get("class") == "reference")
        assert len(root.findall("svg:circle", NS)) == 3
        assert float(line.get("x1")) < float(line.get("x2"))
        assert float(line.get("y1")) > float(line.get("y2"))

    def test_axes_carry_units(self):
        root = parse(fit_plot([0.0, 1.0], [0.0, 1.0], "Tree"))
        labels = [t.text for t in root.iter(f"{{{SVG_NAMESPACE}}}text")
                  if t.get("class") == "axis-label"]
        assert labels == ["Actual (kW)", "Predicted (kW)"]

    def test_model_name_is_escaped(self):
        document = fit_plot([0.0, 1.0], [0.0, 1.0], "a < b")
        assert "a &lt; b" in document
        parse(document)

    def test_needs_two_points(self):
        with pytest.raises(EmptyDatasetError):
            fit_plot([1.0], [1.0], "Tree")

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            fit_plot([1.0, 2.0], [1.0], "Tree")


class TestFigureExamples:
    def test_perfect_fit_annotation(self):
        actual = np.array([10.0, 250.0, 900.0, 1800.0])
        root = parse(fit_plot(actual, actual, "Tree"))
        assert _annotation(root) == "R² = 1.000"

    def test_constant_mean_annotation(self):
        actual = np.array([10.0, 250.0, 900.0, 1800.0])
        root = parse(fit_plot(actual, np.full(4, actual.mean()), "Mean"))
        assert _annotation(root) == "R² = 0.000"

    def test_actual_only_overlay(self):
        root = parse(overlay_plot(None, np.arange(10.0), {}))
        assert len(root.findall("svg:path", NS)) == 1
        legend = [
            g for g in root.iter(f"{{{SVG_NAMESPACE}}}g") if g.get("class") == "legend-entry"
        ]
        assert len(legend) == 1

    def test_identical_prediction_coincides(self):
        actual = np.linspace(5.0, 50.0, 12)
        root = parse(overlay_plot(None, actual, {"Copy": actual.copy()}))
        first, second = root.findall("svg:path", NS)
        assert first.get("d") == second.get("d")

    def test_default_window_has_144_vertices(self, small_dataset):
        root = parse(overlay_plot(small_dataset.timestamps, small_dataset.target, {}))
        (path,) = root.findall("svg:path", NS)
        assert len(re.findall(r"[ML]", path.get("d"))) == 144

    def test_identical_columns_lie_on_diagonal(self):
        values = np.array([1.0, 4.0, 2.0, 8.0])
        table = _Columns({"a": values, "b": values.copy()})
        root = parse(scatter_matrix(table))
        for cell in cells(root, "scatter"):
            for point in cell.findall("svg:circle", NS):
                # y is inverted inside the cell: cx + cy is constant on y = x
                total = float(point.get("cx")) + float(point.get("cy"))
                assert total == pytest.approx(120.0, abs=0.011)

    def test_no_nan_coordinates(self, small_dataset):
        documents = [
            scatter_matrix(small_dataset),
            overlay_plot(small_dataset.timestamps, small_dataset.target, {}),
            fit_plot(small_dataset.target, small_dataset.target[::-1], "Reversed"),
        ]
        for document in documents:
            assert not re.search(r"\bnan\b", document, re.IGNORECASE)
            parse(document)


class _Columns:
    def __init__(self, columns: dict[str, np.ndarray]) -> None:
        self._columns = columns

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(self._columns)

    def column(self, name: str) -> np.ndarray:
        return self._columns[name]


def _annotation(root: ET.Element) -> str:
    return next(
        t.text for t in root.iter(f"{{{SVG_NAMESPACE}}}text") if t.get("class") == "annotation"
    )
