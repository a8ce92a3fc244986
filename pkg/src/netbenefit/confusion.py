"""Per-capita classification quantities as step functions of the threshold.

A subject is flagged at threshold t iff its score is STRICTLY above t.
Some decision-curve tools flag at score >= t instead; the strict convention
is what makes the closed-form score-sum identities in ``continuous`` exact,
so it is applied everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netbenefit import _kernels
from netbenefit.dataset import EvaluationDataset
from netbenefit.errors import ValidationError


@dataclass(frozen=True)
class ClassificationCurve:
    """Weighted per-capita TP(t)/FP(t) step functions with their jump points.

    ``tp_levels[j]`` is the TP value on the interval ``[jump_points[j-1],
    jump_points[j])`` (for ``j=0``: everything below the smallest score), so
    the level arrays have one more entry than ``jump_points``.  FN and TN
    follow from ``FN = prevalence - TP`` and ``TN = 1 - prevalence - FP``.
    """

    jump_points: np.ndarray
    tp_levels: np.ndarray
    fp_levels: np.ndarray
    prevalence: float
    model: str = ""

    def _index(self, t):
        # strict f > t: a threshold sitting exactly on a jump drops that mass
        return np.searchsorted(self.jump_points, t, side="right")

    def tp(self, t):
        """TP(t), vectorized over t."""
        return self.tp_levels[self._index(t)]

    def fp(self, t):
        """FP(t), vectorized over t."""
        return self.fp_levels[self._index(t)]


def sweep(ds: EvaluationDataset, model: str) -> ClassificationCurve:
    """Build the weighted TP/FP step functions for one model.

    TP(t) = sum_i w_i y_i [f_i > t] / sum_i w_i, and likewise FP(t) for the
    non-cases.  Duplicate scores collapse into one jump point.
    """
    f = ds.model_scores(model)
    order = np.argsort(f, kind="stable")
    total = float(np.sum(ds.weights))
    case_mass = (ds.weights * ds.outcomes)[order] / total
    control_mass = (ds.weights * (1.0 - ds.outcomes))[order] / total
    jumps, tp, fp = _kernels.suffix_levels(f[order], case_mass, control_mass)
    prevalence = float(np.dot(ds.weights, ds.outcomes) / total)
    return ClassificationCurve(
        jump_points=jumps, tp_levels=tp, fp_levels=fp, prevalence=prevalence, model=model
    )


def confusion_at(curve: ClassificationCurve, t: float) -> tuple[float, float, float, float]:
    """Per-capita (TP, FP, FN, TN) at a threshold strictly inside (0, 1)."""
    if not 0.0 < t < 1.0:
        raise ValidationError(f"threshold {t!r} must lie strictly inside (0, 1)")
    tp = float(curve.tp(t))
    fp = float(curve.fp(t))
    return tp, fp, curve.prevalence - tp, 1.0 - curve.prevalence - fp
