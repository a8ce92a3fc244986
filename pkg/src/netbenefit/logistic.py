"""Minimal weighted logistic regression (Newton / IRLS) so the demos and
optimism correction are self-contained.

The ridge penalty, when used, excludes the intercept so that
calibration-in-the-large stays unbiased.  No splines, interactions, or
variable selection; callers pre-expand features.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from netbenefit.errors import FitError, ValidationError


def expit(z):
    """Numerically stable inverse logit."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class LogisticModel:
    feature_names: tuple[str, ...]
    intercept: float
    coefficients: np.ndarray
    ridge: float
    n_iter: int
    max_change: float

    def linear_predictor(self, features) -> np.ndarray:
        X = _as_matrix(features, len(self.feature_names))
        return self.intercept + X @ self.coefficients

    def to_json(self) -> str:
        return json.dumps(
            {
                "feature_names": list(self.feature_names),
                "intercept": self.intercept,
                "coefficients": [float(c) for c in self.coefficients],
                "ridge": self.ridge,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LogisticModel":
        data = json.loads(text)
        return cls(
            feature_names=tuple(data["feature_names"]),
            intercept=float(data["intercept"]),
            coefficients=np.asarray(data["coefficients"], dtype=np.float64),
            ridge=float(data.get("ridge", 0.0)),
            n_iter=0,
            max_change=0.0,
        )


def _as_matrix(features, expected_cols: int | None = None) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValidationError("features must be a 2-d matrix (rows = subjects)")
    if expected_cols is not None and X.shape[1] != expected_cols:
        raise ValidationError(
            f"feature count mismatch: model has {expected_cols}, data has {X.shape[1]}"
        )
    return X


def fit_logistic(
    features,
    outcomes,
    weights=None,
    ridge: float = 0.0,
    tol: float = 1e-8,
    max_iter: int = 100,
    feature_names: tuple[str, ...] | None = None,
) -> LogisticModel:
    """Maximize the weighted (optionally ridge-penalized) log likelihood.

    Newton steps on the full coefficient vector; converged when the largest
    coefficient change drops below ``tol``.  Perfectly separable data never
    converges at ridge=0 -- the error suggests a positive penalty.
    """
    X = _as_matrix(features)
    y = np.asarray(outcomes, dtype=np.float64)
    n, p = X.shape
    if y.shape != (n,):
        raise ValidationError("outcomes length does not match feature rows")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValidationError("outcomes must be 0 or 1")
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise ValidationError("weights length does not match feature rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(w))):
        raise ValidationError("features and weights must be finite")
    if ridge < 0:
        raise ValidationError("ridge penalty must be nonnegative")
    if feature_names is None:
        feature_names = tuple(f"x{j}" for j in range(p))
    if len(feature_names) != p:
        raise ValidationError("feature_names length does not match feature columns")

    design = np.hstack([np.ones((n, 1)), X])
    penalty = np.zeros(p + 1)
    penalty[1:] = ridge  # intercept unpenalized
    beta = np.zeros(p + 1)
    max_change = np.inf
    for iteration in range(1, max_iter + 1):
        prob = expit(design @ beta)
        gradient = design.T @ (w * (y - prob)) - penalty * beta
        curvature = w * prob * (1.0 - prob)
        hessian = (design * curvature[:, None]).T @ design + np.diag(penalty)
        try:
            step = np.linalg.solve(hessian, gradient)
        except np.linalg.LinAlgError:
            raise FitError(
                "singular design matrix; remove collinear features or add ridge > 0"
            ) from None
        beta = beta + step
        max_change = float(np.max(np.abs(step)))
        if not np.isfinite(max_change):
            raise FitError(
                "diverging coefficients (separation?); try ridge > 0"
            )
        if max_change < tol:
            return LogisticModel(
                feature_names=feature_names,
                intercept=float(beta[0]),
                coefficients=beta[1:].copy(),
                ridge=ridge,
                n_iter=iteration,
                max_change=max_change,
            )
    raise FitError(
        f"no convergence after {max_iter} iterations (last coefficient change "
        f"{max_change:.3g}); the data may be separable -- try ridge > 0"
    )


def predict(model: LogisticModel, features) -> np.ndarray:
    """Scores from the inverse-logit of the linear predictor.

    Values are limited only by floating-point range, never clamped by policy.
    """
    return expit(model.linear_predictor(features))
