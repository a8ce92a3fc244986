"""Continuous and expected net benefit, density-weighted areas under the
net-benefit curve, and the scoring rules they relate to.

The continuous net benefit integrates the rescaled net-benefit curve
TP(t)/t - FP(t)/(1-t) against a threshold weighting.  Because TP and FP are
step functions of the subjects' scores, the integral collapses to an exact
per-subject sum

    (1/W) * sum_i w_i * [ y_i * W1(f_i) - (1 - y_i) * W0(f_i) ]

which is the default evaluation route.  A direct quadrature of the
threshold integral is kept as an independent route for verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from netbenefit import _kernels
from netbenefit.confusion import sweep
from netbenefit.dataset import EvaluationDataset
from netbenefit.errors import DivergentIntegralError, ValidationError
from netbenefit.quadrature import QuadConfig, integrate_segment, tail_to_one, tail_to_zero
from netbenefit.weighting import (
    AVERAGED_TRUE_POSITIVES,
    ConstantFpHarmWeight,
    ConstantTpBenefitWeight,
    HarmonicUtilityWeight,
    UniformWeight,
    WeightSpec,
    as_curve,
    cumulative,
    normalize,
)


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    method: str = "percentile-bootstrap"
    replicates: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "method": self.method,
            "replicates": self.replicates,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CnbEstimate:
    """A continuous-net-benefit value with its unit and provenance."""

    value: float
    unit: str
    spec: WeightSpec
    method: str = "subject-sum"
    ci: ConfidenceInterval | None = None

    def with_ci(self, ci: ConfidenceInterval) -> "CnbEstimate":
        return replace(self, ci=ci)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "unit": self.unit,
            "method": self.method,
            "spec": self.spec.to_dict(),
            "ci": self.ci.to_dict() if self.ci is not None else None,
        }


def _guided(exc: DivergentIntegralError) -> DivergentIntegralError:
    return DivergentIntegralError(
        f"{exc}; the absolute continuous net benefit is undefined for this "
        "weighting -- compare models with cnb_difference (CLI: compare) or "
        "configure cutoffs",
        endpoint=exc.endpoint,
    )


def subject_contributions(
    ds: EvaluationDataset, model: str, spec: WeightSpec, config: QuadConfig | None = None
) -> np.ndarray:
    """Per-subject contribution y*W1(f) - (1-y)*W0(f).

    The weighted mean of these contributions is the continuous net benefit;
    the contribution of a subject does not depend on the rest of the
    dataset, which is what makes bootstrap resampling cheap.
    """
    try:
        cw = cumulative(spec, config)
        f = ds.model_scores(model)
        return ds.outcomes * cw.w1(f) - (1.0 - ds.outcomes) * cw.w0(f)
    except DivergentIntegralError as exc:
        raise _guided(exc) from None


def continuous_net_benefit(
    ds: EvaluationDataset,
    model: str,
    spec: WeightSpec,
    config: QuadConfig | None = None,
    method: str = "subject",
) -> CnbEstimate:
    """Continuous net benefit of one model under a threshold weighting.

    ``method="subject"`` uses the exact per-subject sum; ``"threshold"``
    integrates the weighted rescaled net-benefit curve segment by segment
    (slower; used to cross-check the subject route).
    """
    if method == "subject":
        try:
            cw = cumulative(spec, config)
        except DivergentIntegralError as exc:
            raise _guided(exc) from None
        f = ds.model_scores(model)
        value = _kernels.weighted_score_sum(ds.weights, ds.outcomes, cw.w1(f), cw.w0(f))
        tag = "subject-sum"
    elif method == "threshold":
        value = _threshold_route(ds, model, spec, config)
        tag = "threshold-quadrature"
    else:
        raise ValidationError(f"unknown evaluation method {method!r}")
    return CnbEstimate(value=value, unit=spec.unit, spec=spec, method=tag)


def _threshold_route(
    ds: EvaluationDataset, model: str, spec: WeightSpec, config: QuadConfig | None
) -> float:
    config = config or QuadConfig()
    lo, hi = config.domain()
    curve = sweep(ds, model)

    pieces: list[float] = []
    for t_star, mass in spec.atoms():
        if lo <= t_star < hi:
            pieces.append(
                mass * (curve.tp(t_star) / t_star - curve.fp(t_star) / (1.0 - t_star))
            )

    inner = sorted(
        {float(j) for j in curve.jump_points if lo < j < hi}
        | {b for b in spec.breakpoints() if lo < b < hi}
    )
    knots = [lo, *inner, hi]
    for a, b in zip(knots[:-1], knots[1:]):
        mid = (a + b) / 2.0
        tp = float(curve.tp(mid))
        fp = float(curve.fp(mid))
        if tp == 0.0 and fp == 0.0:
            continue

        def integrand(t, tp=tp, fp=fp):
            t = np.asarray(t, dtype=np.float64)
            return spec._density(t) * (tp / t - fp / (1.0 - t))

        def integrand_complement(u, tp=tp, fp=fp):
            u = np.asarray(u, dtype=np.float64)
            return spec._density(1.0 - u) * (tp / (1.0 - u) - fp / u)

        try:
            if a == 0.0:
                pieces.append(tail_to_zero(integrand, b, config))
            elif b == 1.0:
                launch = max(a, 0.96)
                pieces.append(
                    integrate_segment(integrand, a, launch, config, True, True)
                    + tail_to_one(integrand_complement, launch, config)
                )
            else:
                pieces.append(integrate_segment(integrand, a, b, config, True, True))
        except DivergentIntegralError as exc:
            raise _guided(exc) from None
    return math.fsum(pieces)


def treat_all_cnb(
    prevalence: float, spec: WeightSpec, config: QuadConfig | None = None
) -> float:
    """Continuous net benefit of flagging everyone: pi*W1(1) - (1-pi)*W0(1)."""
    try:
        cw = cumulative(spec, config)
        return prevalence * float(cw.w1(1.0)) - (1.0 - prevalence) * float(cw.w0(1.0))
    except DivergentIntegralError as exc:
        raise _guided(exc) from None


def cnb_difference(
    ds: EvaluationDataset,
    model1: str,
    model2: str,
    spec: WeightSpec,
    config: QuadConfig | None = None,
) -> float:
    """CNB(model1) - CNB(model2).

    For the uniform weighting the absolute values diverge but the
    difference is the per-capita log-likelihood difference, computed here
    in closed form (requires scores strictly inside (0, 1)).
    """
    if isinstance(spec, UniformWeight):
        f1 = ds.model_scores(model1)
        f2 = ds.model_scores(model2)
        for name, f in ((model1, f1), (model2, f2)):
            boundary = np.flatnonzero((f == 0.0) | (f == 1.0))
            if boundary.size:
                raise ValidationError(
                    f"model {name!r}, subject {int(boundary[0])}: score is exactly "
                    f"{float(f[boundary[0]]):g}; the uniform-weighting difference "
                    "needs scores strictly inside (0, 1)"
                )
        y = ds.outcomes
        terms = y * np.log(f1 / f2) + (1.0 - y) * np.log((1.0 - f1) / (1.0 - f2))
        return spec.level * float(np.dot(ds.weights, terms) / np.sum(ds.weights))
    c1 = subject_contributions(ds, model1, spec, config)
    c2 = subject_contributions(ds, model2, spec, config)
    return float(np.dot(ds.weights, c1 - c2) / np.sum(ds.weights))


def expected_net_benefit(
    ds: EvaluationDataset,
    model: str,
    density: WeightSpec,
    tp_benefit,
    fp_harm,
    config: QuadConfig | None = None,
    normalized: bool = False,
) -> CnbEstimate:
    """Expected net benefit over a population with a distribution of optimal
    thresholds and utility curves.

    Builds the weighting density(t) * harmonic(tp_benefit(t), fp_harm(t))
    and evaluates the continuous net benefit with it.  When normalized, the
    unit is the averaged true positive across the population.
    """
    spec: WeightSpec = HarmonicUtilityWeight(
        tp_benefit=as_curve(tp_benefit), fp_harm=as_curve(fp_harm), density=density
    )
    if normalized:
        spec = normalize(spec, config, unit=AVERAGED_TRUE_POSITIVES)
    return continuous_net_benefit(ds, model, spec, config)


def aunb(
    ds: EvaluationDataset, model: str, density: WeightSpec, config: QuadConfig | None = None
) -> float:
    """Density-weighted area under the net-benefit curve, assuming every
    true positive carries the same benefit."""
    return continuous_net_benefit(
        ds, model, ConstantTpBenefitWeight(density=density), config
    ).value


def aunb_alt(
    ds: EvaluationDataset, model: str, density: WeightSpec, config: QuadConfig | None = None
) -> float:
    """Density-weighted area under the alternative net-benefit curve
    (1-t)/t * TP - FP, assuming every false positive carries the same harm."""
    return continuous_net_benefit(
        ds, model, ConstantFpHarmWeight(density=density), config
    ).value


def log_likelihood(ds: EvaluationDataset, model: str) -> float:
    """Per-capita weighted log likelihood of the outcomes under the scores."""
    f = ds.model_scores(model)
    y = ds.outcomes
    bad = np.flatnonzero(((y == 1.0) & (f == 0.0)) | ((y == 0.0) & (f == 1.0)))
    if bad.size:
        i = int(bad[0])
        raise ValidationError(
            f"model {model!r}, subject {i}: outcome {int(ds.outcomes[i])} has score "
            f"{float(f[i]):g}, making the log likelihood -inf"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(y == 1.0, np.log(np.where(f > 0.0, f, 1.0)), 0.0) + np.where(
            y == 0.0, np.log(np.where(f < 1.0, 1.0 - f, 1.0)), 0.0
        )
    return float(np.dot(ds.weights, terms) / np.sum(ds.weights))


def brier(ds: EvaluationDataset, model: str) -> float:
    """Per-capita weighted Brier score (mean squared error of the scores)."""
    f = ds.model_scores(model)
    residual = ds.outcomes - f
    return float(np.dot(ds.weights, residual * residual) / np.sum(ds.weights))
