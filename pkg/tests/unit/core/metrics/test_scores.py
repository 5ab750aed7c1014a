"""Tests for error and goodness-of-fit measures."""

from __future__ import annotations

import math

import numpy as np
import pytest

from windreg.core.errors import DataError
from windreg.core.metrics.scores import (
    ConstantActualError,
    EmptyInputError,
    LengthMismatchError,
    MetricError,
    NonFiniteInputError,
    get_metric,
    mae,
    pearson,
    r2_ratio,
    r2_score,
    rmse,
    score_all,
)
from windreg.core.models.linear import fit_linear


class TestMae:
    def test_perfect_prediction(self):
        assert mae([1, 2, 3], [1, 2, 3]) == 0.0

    def test_symmetric_unit_errors(self):
        assert mae([0, 0], [1, -1]) == 1.0

    def test_hand_evaluated(self):
        assert mae([2, 4, 6], [1, 5, 9]) == pytest.approx(5 / 3, abs=1e-12)

    def test_single_observation_allowed(self):
        assert mae([3.0], [1.0]) == 2.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError) as info:
            mae([1, 2, 3], [1, 2])
        assert info.value.actual_len == 3
        assert info.value.predicted_len == 2

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            mae([], [])

    def test_non_finite(self):
        with pytest.raises(NonFiniteInputError):
            mae([1.0, float("nan")], [1.0, 2.0])


class TestRmse:
    def test_identical_vectors(self):
        assert rmse([5, 6, 7], [5, 6, 7]) == 0.0

    def test_hand_evaluated(self):
        assert rmse([0, 0], [3, 4]) == pytest.approx(math.sqrt(12.5), abs=1e-8)

    def test_never_below_mae(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.normal(size=15)
            p = rng.normal(size=15)
            assert rmse(a, p) >= mae(a, p) - 1e-12


class TestR2Ratio:
    def test_perfect_prediction(self):
        assert r2_ratio([1, 2, 3], [1, 2, 3]) == 1.0

    def test_mean_prediction_is_zero(self):
        assert r2_ratio([1, 5, 9], [5, 5, 5]) == 0.0

    def test_can_exceed_one(self):
        assert r2_ratio([0, 1, 2], [0, 2, 2]) == pytest.approx(1.5)

    def test_constant_actual(self):
        with pytest.raises(ConstantActualError):
            r2_ratio([4, 4, 4], [1, 2, 3])

    def test_single_observation(self):
        with pytest.raises(ConstantActualError):
            r2_ratio([1.0], [1.0])

    def test_matches_r2_score_for_least_squares_on_training_data(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(8, 40))
            x = rng.normal(size=(n, 3))
            y = x @ rng.normal(size=3) + rng.normal(size=n)
            fitted = fit_linear(x, y).predict(x)
            assert r2_ratio(y, fitted) == pytest.approx(r2_score(y, fitted), abs=1e-8)


class TestR2Score:
    def test_perfect_prediction(self):
        assert r2_score([1, 2, 3], [1, 2, 3]) == 1.0

    def test_mean_prediction_is_zero(self):
        assert r2_score([1, 5, 9], [5, 5, 5]) == 0.0

    def test_hand_evaluated(self):
        assert r2_score([0, 1, 2], [0, 2, 2]) == pytest.approx(0.5)

    def test_can_be_negative(self):
        assert r2_score([0, 1, 2], [2, 1, 0]) < 0

    def test_constant_actual(self):
        with pytest.raises(ConstantActualError):
            r2_score([2, 2], [1, 3])


class TestRegistry:
    def test_lookup(self):
        assert get_metric("mae") is mae
        assert get_metric("r2_score") is r2_score

    def test_unknown_metric(self):
        with pytest.raises(MetricError, match="Unknown metric"):
            get_metric("mape")

    def test_metric_errors_are_data_errors(self):
        assert issubclass(MetricError, DataError)


class TestScoreAll:
    def test_fields_agree_with_individual_metrics(self):
        actual = [0.0, 1.0, 2.0, 4.0]
        predicted = [0.5, 1.0, 2.5, 3.0]
        scores = score_all(actual, predicted)
        assert scores.mae == mae(actual, predicted)
        assert scores.rmse == rmse(actual, predicted)
        assert scores.r2_score == r2_score(actual, predicted)
        assert scores.r2_ratio == r2_ratio(actual, predicted)
        assert scores.n == 4

    def test_as_dict_keys(self):
        scores = score_all([0, 1, 2], [0, 1, 2])
        assert set(scores.as_dict()) == {"mae", "rmse", "r2_score", "r2_ratio", "n"}


class TestPearson:
    def test_perfect_positive(self):
        assert pearson([1, 2, 3, 4], [2, 4, 6, 8]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_constant_input_is_zero(self):
        assert pearson([1, 1, 1], [1, 2, 3]) == 0.0

    def test_single_point_is_zero(self):
        assert pearson([1.0], [2.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            pearson([1, 2], [1, 2, 3])


class TestMetricProperties:
    def test_errors_ignore_common_shift(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a, p = rng.normal(100.0, 30.0, size=(2, 40))
            shift = float(rng.uniform(-500.0, 500.0))
            assert mae(a + shift, p + shift) == pytest.approx(mae(a, p), rel=1e-9)
            assert rmse(a + shift, p + shift) == pytest.approx(rmse(a, p), rel=1e-9)

    def test_errors_scale_with_units(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            a, p = rng.normal(size=(2, 40))
            factor = float(rng.uniform(-20.0, 20.0))
            assert mae(factor * a, factor * p) == pytest.approx(abs(factor) * mae(a, p), rel=1e-9)
            assert rmse(factor * a, factor * p) == pytest.approx(
                abs(factor) * rmse(a, p), rel=1e-9
            )

    def test_r2_bounds(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            n = int(rng.integers(2, 30))
            a = rng.normal(size=n)
            p = rng.normal(scale=float(rng.uniform(0.1, 5.0)), size=n)
            assert r2_score(a, p) <= 1.0
            assert r2_ratio(a, p) >= 0.0
