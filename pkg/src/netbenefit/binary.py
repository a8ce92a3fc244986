"""Binary net benefit, decision curves, baseline policies, and combination
of two decisions with different units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netbenefit.confusion import ClassificationCurve, sweep
from netbenefit.dataset import EvaluationDataset, summarize
from netbenefit.errors import ValidationError


def _check_threshold(t: float) -> None:
    if not 0.0 < t < 1.0:
        raise ValidationError(f"threshold {t!r} must lie strictly inside (0, 1)")


def net_benefit(curve: ClassificationCurve, t: float) -> float:
    """TP(t) - t/(1-t) * FP(t), in true positives per capita."""
    _check_threshold(t)
    return float(curve.tp(t) - (t / (1.0 - t)) * curve.fp(t))


def rescaled_net_benefit(curve: ClassificationCurve, t: float) -> float:
    """TP(t)/t - FP(t)/(1-t), i.e. NB(t)/t; the integrand of the continuous
    net benefit."""
    _check_threshold(t)
    return float(curve.tp(t) / t - curve.fp(t) / (1.0 - t))


def treat_all_net_benefit(prevalence: float, t) -> np.ndarray:
    """Net benefit of flagging everyone: pi - t*(1-pi)/(1-t)."""
    t = np.asarray(t, dtype=np.float64)
    return prevalence - t * (1.0 - prevalence) / (1.0 - t)


def combine_decisions(nb1: float, nb2: float, effect_ratio: float) -> float:
    """Total net benefit of two decisions in the first decision's units.

    ``effect_ratio`` is the relative value of the second intervention's true
    positives against the first's, estimated by the caller.
    """
    if effect_ratio < 0:
        raise ValidationError(f"effect ratio must be nonnegative, got {effect_ratio!r}")
    return nb1 + effect_ratio * nb2


@dataclass(frozen=True)
class DecisionCurveTable:
    """Net benefit per policy over a threshold grid, ready for plotting."""

    grid: np.ndarray
    policies: dict[str, np.ndarray]
    rescaled: dict[str, np.ndarray] | None = None

    def to_rows(self) -> list[dict]:
        rows = []
        for i, t in enumerate(self.grid):
            row = {"threshold": float(t)}
            for name, values in self.policies.items():
                row[name] = float(values[i])
            rows.append(row)
        return rows


def default_grid() -> np.ndarray:
    """99 thresholds 0.01 .. 0.99 in steps of 0.01."""
    return np.round(np.arange(1, 100) / 100.0, 2)


def decision_curve(
    ds: EvaluationDataset,
    models: list[str] | None = None,
    grid: np.ndarray | None = None,
    include_rescaled: bool = False,
) -> DecisionCurveTable:
    """Decision curve for the given models plus treat-all / treat-none baselines."""
    if models is None:
        models = list(ds.models)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValidationError("threshold grid is empty")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise ValidationError("grid thresholds must lie strictly inside (0, 1)")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError("grid thresholds must be strictly ascending")

    prevalence = summarize(ds).prevalence
    policies: dict[str, np.ndarray] = {}
    rescaled: dict[str, np.ndarray] = {}
    for model in models:
        curve = sweep(ds, model)
        tp = curve.tp(grid)
        fp = curve.fp(grid)
        policies[model] = tp - grid / (1.0 - grid) * fp
        rescaled[model] = tp / grid - fp / (1.0 - grid)
    policies["treat_all"] = treat_all_net_benefit(prevalence, grid)
    policies["treat_none"] = np.zeros_like(grid)
    rescaled["treat_all"] = prevalence / grid - (1.0 - prevalence) / (1.0 - grid)
    rescaled["treat_none"] = np.zeros_like(grid)
    return DecisionCurveTable(
        grid=grid, policies=policies, rescaled=rescaled if include_rescaled else None
    )
