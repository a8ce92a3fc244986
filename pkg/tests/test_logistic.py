import math

import numpy as np
import pytest

from netbenefit.errors import FitError, ValidationError
from netbenefit.logistic import LogisticModel, expit, fit_logistic, predict


class TestFit:
    def test_intercept_only_balanced(self):
        model = fit_logistic(np.empty((4, 0)), np.array([1.0, 0, 1, 0]))
        assert model.intercept == pytest.approx(0.0, abs=1e-10)

    def test_intercept_only_three_quarters(self):
        model = fit_logistic(np.empty((4, 0)), np.array([1.0, 1, 1, 0]))
        assert model.intercept == pytest.approx(math.log(3), abs=1e-8)

    def test_recovers_known_coefficients(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((5000, 3))
        truth = np.array([-1.0, 0.8, -0.5, 1.2])
        p = expit(truth[0] + X @ truth[1:])
        y = (rng.random(5000) < p).astype(float)
        model = fit_logistic(X, y)
        fitted = np.concatenate(([model.intercept], model.coefficients))
        assert fitted == pytest.approx(truth, abs=0.1)

    def test_weighted_fit_matches_replication(self):
        # weight 2 must equal duplicating the row
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        w = np.array([2.0, 1.0, 1.0, 1.0])
        a = fit_logistic(X, y, w, ridge=0.1)
        Xdup = np.vstack([X[[0]], X])
        ydup = np.concatenate([[0.0], y])
        b = fit_logistic(Xdup, ydup, ridge=0.1)
        assert a.intercept == pytest.approx(b.intercept, abs=1e-9)
        assert a.coefficients == pytest.approx(b.coefficients, abs=1e-9)

    def test_separation_raises_suggesting_ridge(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        with pytest.raises(FitError, match="ridge"):
            fit_logistic(X, y, max_iter=60)
        # with ridge it converges
        model = fit_logistic(X, y, ridge=0.5)
        assert model.n_iter <= 60

    def test_singular_design_raises(self):
        X = np.column_stack([np.ones(20), np.ones(20)])
        y = (np.arange(20) % 2).astype(float)
        with pytest.raises(FitError, match="singular|ridge"):
            fit_logistic(X, y)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValidationError, match="finite"):
            fit_logistic(np.array([[np.nan]]), np.array([1.0]))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValidationError):
            fit_logistic(np.zeros((3, 1)), np.array([1.0, 0.0]))


class TestProperties:
    def test_score_equation_mean_calibration(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((400, 2))
        y = (rng.random(400) < expit(0.3 + X[:, 0])).astype(float)
        w = rng.uniform(0.5, 2.0, 400)
        model = fit_logistic(X, y, w)
        scores = predict(model, X)
        assert np.dot(w, scores) / w.sum() == pytest.approx(np.dot(w, y) / w.sum(), abs=1e-8)

    def test_doubling_weights_leaves_fit_unchanged(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((200, 2))
        y = (rng.random(200) < 0.4).astype(float)
        w = rng.uniform(0.5, 2.0, 200)
        a = fit_logistic(X, y, w)
        b = fit_logistic(X, y, 2.0 * w)
        assert a.intercept == pytest.approx(b.intercept, abs=1e-12)
        assert a.coefficients == pytest.approx(b.coefficients, abs=1e-12)

    def test_ridge_shrinks_coefficients_not_calibration(self):
        rng = np.random.default_rng(6)
        X = rng.standard_normal((300, 2))
        y = (rng.random(300) < expit(X[:, 0])).astype(float)
        free = fit_logistic(X, y)
        penalized = fit_logistic(X, y, ridge=50.0)
        assert np.abs(penalized.coefficients).sum() < np.abs(free.coefficients).sum()
        # intercept unpenalized: mean score still matches prevalence
        assert predict(penalized, X).mean() == pytest.approx(y.mean(), abs=1e-6)


class TestPredict:
    def test_zero_coefficients_give_half(self):
        model = LogisticModel(("x0",), 0.0, np.zeros(1), 0.0, 1, 0.0)
        assert predict(model, np.array([[3.0], [-2.0]])).tolist() == [0.5, 0.5]

    def test_intercept_log3(self):
        model = LogisticModel((), math.log(3), np.zeros(0), 0.0, 1, 0.0)
        assert predict(model, np.empty((2, 0))) == pytest.approx([0.75, 0.75], rel=1e-12)

    def test_dimension_mismatch(self):
        model = LogisticModel(("x0",), 0.0, np.zeros(1), 0.0, 1, 0.0)
        with pytest.raises(ValidationError, match="feature count"):
            predict(model, np.zeros((2, 3)))

    def test_extreme_linear_predictor_stays_in_float_range(self):
        model = LogisticModel(("x0",), 0.0, np.array([1.0]), 0.0, 1, 0.0)
        scores = predict(model, np.array([[700.0], [-700.0]]))
        assert scores[0] == 1.0 or scores[0] < 1.0  # no overflow/nan
        assert np.all(np.isfinite(scores))

    def test_json_round_trip(self):
        model = fit_logistic(np.array([[0.5], [1.5], [-1.0]]), np.array([1.0, 1.0, 0.0]), ridge=0.2)
        again = LogisticModel.from_json(model.to_json())
        assert again.intercept == model.intercept
        assert again.coefficients == pytest.approx(model.coefficients, rel=0)
        assert again.feature_names == model.feature_names


class TestExpit:
    def test_midpoint(self):
        assert expit(np.array([0.0]))[0] == 0.5

    def test_symmetry(self):
        z = np.linspace(-30, 30, 13)
        assert expit(z) + expit(-z) == pytest.approx(np.ones_like(z), rel=1e-12)
