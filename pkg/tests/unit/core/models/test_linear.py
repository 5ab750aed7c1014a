"""Tests for ordinary least squares regression."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from windreg.core.errors import DimensionMismatchError
from windreg.core.models.base import TooFewRowsError
from windreg.core.models.linear import (
    LinearModel,
    RankDeficientError,
    fit_linear,
    predict_linear,
)


# ---------------------------------------------------------------------------
# Oracle: normal equations solved by Cramer's rule with permutation determinants
# ---------------------------------------------------------------------------

def _det(matrix: list[list[float]]) -> float:
    size = len(matrix)
    total = 0.0
    for perm in itertools.permutations(range(size)):
        inversions = sum(
            1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j]
        )
        term = -1.0 if inversions % 2 else 1.0
        for row, col in enumerate(perm):
            term *= matrix[row][col]
        total += term
    return total


def _normal_equation_oracle(x: np.ndarray, y: np.ndarray) -> list[float]:
    design = np.column_stack([np.ones(x.shape[0]), x])
    gram = (design.T @ design).tolist()
    rhs = (design.T @ y).tolist()
    base = _det(gram)
    solution = []
    for j in range(len(rhs)):
        replaced = [row[:j] + [rhs[i]] + row[j + 1:] for i, row in enumerate(gram)]
        solution.append(_det(replaced) / base)
    return solution


class TestFitLinear:
    def test_exact_line(self):
        model = fit_linear([[0.0], [1.0], [2.0]], [1.0, 3.0, 5.0])
        assert model.intercept == pytest.approx(1.0, abs=1e-12)
        assert model.slopes[0] == pytest.approx(2.0, abs=1e-12)
        assert model.training_residual_std == pytest.approx(0.0, abs=1e-12)

    def test_duplicated_column_is_rank_deficient(self):
        x = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [5.0, 5.0]])
        with pytest.raises(RankDeficientError) as info:
            fit_linear(x, [1.0, 2.0, 3.0, 4.0], ["speed", "speed_copy"])
        assert info.value.column == "speed_copy"

    def test_constant_column_collides_with_intercept(self):
        x = np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0], [4.0, 7.0]])
        with pytest.raises(RankDeficientError) as info:
            fit_linear(x, [1.0, 2.0, 3.0, 5.0])
        assert info.value.column == "x1"

    def test_too_few_rows(self):
        with pytest.raises(TooFewRowsError):
            fit_linear([[1.0, 2.0], [3.0, 4.0]], [1.0, 2.0])

    def test_small_instance_matches_oracle(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(5, 2))
        y = rng.normal(size=5)
        model = fit_linear(x, y)
        expected = _normal_equation_oracle(x, y)
        got = [model.intercept, *model.slopes]
        np.testing.assert_allclose(got, expected, rtol=1e-8, atol=1e-10)

    def test_random_instances_match_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            p = int(rng.integers(1, 5))
            n = int(rng.integers(p + 2, 51))
            x = rng.normal(size=(n, p)) * rng.uniform(0.5, 20.0, size=p)
            y = x @ rng.normal(size=p) + rng.normal(size=n)
            model = fit_linear(x, y)
            expected = _normal_equation_oracle(x, y)
            np.testing.assert_allclose(
                [model.intercept, *model.slopes], expected, rtol=1e-8, atol=1e-9
            )

    def test_residual_std_uses_degrees_of_freedom(self):
        x = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0.0, 2.0, 1.0, 3.0])
        model = fit_linear(x, y)
        residuals = y - model.predict(x)
        expected = np.sqrt(residuals @ residuals / 2)
        assert model.training_residual_std == pytest.approx(expected)


class TestPredictLinear:
    def test_intercept_at_origin(self):
        model = LinearModel(intercept=1.0, slopes=(2.0,))
        assert predict_linear(model, [[0.0]])[0] == 1.0

    def test_zero_model(self):
        model = LinearModel(intercept=0.0, slopes=(0.0, 0.0))
        np.testing.assert_array_equal(predict_linear(model, [[3.0, -2.0], [9.0, 1.0]]), [0, 0])

    def test_hand_evaluated(self):
        model = LinearModel(intercept=1.0, slopes=(2.0, -1.0))
        assert predict_linear(model, [[3.0, 4.0]])[0] == 3.0

    def test_dimension_mismatch(self):
        model = LinearModel(intercept=1.0, slopes=(2.0, -1.0))
        with pytest.raises(DimensionMismatchError) as info:
            predict_linear(model, [[1.0, 2.0, 3.0]])
        assert info.value.expected == 2
        assert info.value.got == 3

    def test_single_row_vector_accepted(self):
        model = LinearModel(intercept=1.0, slopes=(2.0, -1.0))
        assert model.predict(np.array([3.0, 4.0])).tolist() == [3.0]


class TestLinearProperties:
    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n, p = int(rng.integers(10, 80)), int(rng.integers(1, 5))
            x = rng.normal(size=(n, p)) * rng.uniform(0.5, 50.0, size=p)
            y = rng.normal(size=n) * 100.0
            residuals = y - fit_linear(x, y).predict(x)
            design = np.column_stack([np.ones(n), x])
            scale = np.linalg.norm(design, axis=0) * np.linalg.norm(y)
            assert np.all(np.abs(design.T @ residuals) <= 1e-10 * scale)

    def test_affine_feature_change_keeps_predictions(self):
        rng = np.random.default_rng(32)
        for _ in range(20):
            n, p = int(rng.integers(10, 60)), int(rng.integers(1, 5))
            x = rng.normal(size=(n, p))
            y = x @ rng.normal(size=p) + rng.normal(size=n)
            mix = rng.normal(size=(p, p)) + 3.0 * np.eye(p)
            shifted = x @ mix + rng.uniform(-100.0, 100.0, size=p)
            np.testing.assert_allclose(
                fit_linear(shifted, y).predict(shifted),
                fit_linear(x, y).predict(x),
                rtol=1e-8,
                atol=1e-8,
            )

    def test_refit_is_bitwise_identical(self, small_dataset):
        first = fit_linear(small_dataset.features, small_dataset.target)
        second = fit_linear(small_dataset.features.copy(), small_dataset.target.copy())
        assert first == second
