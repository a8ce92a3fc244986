"""Percentile bootstrap confidence intervals and bootstrap optimism
correction for scalar statistics of a dataset.

Subjects are resampled as whole records (scores, outcome, weight); the
replicate indices come from per-replicate substreams spawned from the seed,
so serial and parallel execution produce identical results and any single
replicate can be reproduced in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from netbenefit import _kernels
from netbenefit.continuous import subject_contributions
from netbenefit.dataset import EvaluationDataset
from netbenefit.errors import NumericError, ValidationError
from netbenefit.quadrature import QuadConfig
from netbenefit.weighting import UniformWeight, WeightSpec, cumulative


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = 5000
    level: float = 0.95
    seed: int | None = None
    max_failure_fraction: float = 0.01
    parallelism: int = 1  # hint only; substreams make any schedule equivalent

    def __post_init__(self):
        if self.replicates < 1:
            raise ValidationError("bootstrap needs at least one replicate")
        if not 0.0 < self.level < 1.0:
            raise ValidationError("confidence level must be inside (0, 1)")


@dataclass(frozen=True)
class Statistic:
    """A named, deterministic scalar function of a dataset.

    ``contributions``, when given, returns a per-subject array such that the
    statistic of any resample equals the weighted mean of the resampled
    contributions.  Statistics with this form bootstrap through a compiled
    accumulation loop instead of re-evaluating ``fn`` per replicate.
    """

    name: str
    fn: Callable[[EvaluationDataset], float]
    contributions: Callable[[EvaluationDataset], np.ndarray] | None = None

    def __call__(self, ds: EvaluationDataset) -> float:
        return float(self.fn(ds))


@dataclass(frozen=True)
class BootstrapResult:
    statistic: str
    point: float
    lower: float
    upper: float
    level: float
    replicates: int
    seed: int | None
    n_failed: int

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "point": self.point,
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "replicates": self.replicates,
            "seed": self.seed,
            "n_failed": self.n_failed,
        }


def percentile_interval(values: np.ndarray, level: float) -> tuple[float, float]:
    """Percentile interval by linear interpolation of order statistics.

    The quantile at q sits at position (B+1)q, so integral positions land
    exactly on order statistics; positions beyond the sample clamp to the
    extremes (a single replicate gives a degenerate interval).
    """
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    return (
        _order_statistic_quantile(ordered, (1.0 - level) / 2.0),
        _order_statistic_quantile(ordered, 1.0 - (1.0 - level) / 2.0),
    )


def _order_statistic_quantile(ordered: np.ndarray, q: float) -> float:
    n = ordered.size
    position = (n + 1) * q
    if position <= 1.0:
        return float(ordered[0])
    if position >= n:
        return float(ordered[-1])
    k = int(math.floor(position))
    fraction = position - k
    return float(ordered[k - 1] + fraction * (ordered[k] - ordered[k - 1]))


def _replicate_indices(seed: int | None, replicates: int, n: int) -> np.ndarray:
    children = np.random.SeedSequence(seed).spawn(replicates)
    indices = np.empty((replicates, n), dtype=np.int64)
    for b, child in enumerate(children):
        indices[b] = np.random.default_rng(child).integers(0, n, size=n)
    return indices


def bootstrap_ci(
    stat: Statistic, ds: EvaluationDataset, config: BootstrapConfig | None = None
) -> BootstrapResult:
    """Percentile bootstrap CI of a statistic; point estimate on the
    original data.  Bit-reproducible given the seed."""
    config = config or BootstrapConfig()
    point = stat(ds)
    indices = _replicate_indices(config.seed, config.replicates, ds.n)

    failures: list[tuple[int, str]] = []
    if stat.contributions is not None:
        contrib = np.asarray(stat.contributions(ds), dtype=np.float64)
        values = np.asarray(_kernels.resample_ratio(contrib, ds.weights, indices))
    else:
        values_list = []
        for b in range(config.replicates):
            try:
                values_list.append(stat(ds.take(indices[b])))
            except Exception as exc:  # noqa: BLE001 -- replicate failures are data
                failures.append((b, f"{type(exc).__name__}: {exc}"))
        values = np.asarray(values_list, dtype=np.float64)

    if len(failures) > config.max_failure_fraction * config.replicates:
        examples = "; ".join(msg for _, msg in failures[:3])
        raise NumericError(
            f"{len(failures)} of {config.replicates} bootstrap replicates failed "
            f"for statistic {stat.name!r} (first: {examples})"
        )
    lower, upper = percentile_interval(values, config.level)
    return BootstrapResult(
        statistic=stat.name,
        point=point,
        lower=lower,
        upper=upper,
        level=config.level,
        replicates=config.replicates,
        seed=config.seed,
        n_failed=len(failures),
    )


@dataclass(frozen=True)
class OptimismResult:
    apparent: float
    optimism: float
    corrected: float
    replicates: int
    seed: int | None
    n_failed: int

    def to_dict(self) -> dict:
        return {
            "apparent": self.apparent,
            "optimism": self.optimism,
            "corrected": self.corrected,
            "replicates": self.replicates,
            "seed": self.seed,
            "n_failed": self.n_failed,
        }


def optimism_correct(
    fit_and_score: Callable[[EvaluationDataset], Callable[[EvaluationDataset], np.ndarray]],
    eval_stat: Callable[[np.ndarray, EvaluationDataset], float],
    ds: EvaluationDataset,
    config: BootstrapConfig | None = None,
) -> OptimismResult:
    """Bootstrap optimism correction of an apparent performance value.

    For each replicate, a model is refit on the replicate and evaluated on
    the replicate (apparent) and on the original data (test); the mean of
    the differences is subtracted from the original apparent value.  The
    same in-sample-minus-original difference computed for the fixed
    original model is subtracted per replicate as a control variate: it has
    zero expectation (it is pure resampling noise), reduces the variance of
    the optimism estimate, and makes the optimism of a fitting procedure
    that ignores its data exactly zero.
    """
    config = config or BootstrapConfig()
    scorer = fit_and_score(ds)
    original_scores = np.asarray(scorer(ds), dtype=np.float64)
    apparent = float(eval_stat(original_scores, ds))

    indices = _replicate_indices(config.seed, config.replicates, ds.n)
    optimisms: list[float] = []
    failures: list[tuple[int, str]] = []
    for b in range(config.replicates):
        replicate = ds.take(indices[b])
        try:
            scorer_b = fit_and_score(replicate)
            refit = float(eval_stat(np.asarray(scorer_b(replicate)), replicate)) - float(
                eval_stat(np.asarray(scorer_b(ds)), ds)
            )
            control = float(eval_stat(original_scores[indices[b]], replicate)) - apparent
            optimisms.append(refit - control)
        except Exception as exc:  # noqa: BLE001
            failures.append((b, f"{type(exc).__name__}: {exc}"))
    if len(failures) > config.max_failure_fraction * config.replicates:
        examples = "; ".join(msg for _, msg in failures[:3])
        raise NumericError(
            f"{len(failures)} of {config.replicates} optimism replicates failed "
            f"(first: {examples})"
        )
    optimism = math.fsum(optimisms) / len(optimisms) if optimisms else 0.0
    return OptimismResult(
        apparent=apparent,
        optimism=optimism,
        corrected=apparent - optimism,
        replicates=config.replicates,
        seed=config.seed,
        n_failed=len(failures),
    )


# ---------------------------------------------------------------------------
# ready-made statistics


def prevalence_statistic() -> Statistic:
    return Statistic(
        name="prevalence",
        fn=lambda ds: float(np.dot(ds.weights, ds.outcomes) / np.sum(ds.weights)),
        contributions=lambda ds: ds.outcomes.copy(),
    )


def nb_statistic(model: str, threshold: float) -> Statistic:
    """Binary net benefit of a model at a fixed threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValidationError("threshold must be inside (0, 1)")
    ratio = threshold / (1.0 - threshold)

    def contributions(ds: EvaluationDataset) -> np.ndarray:
        flagged = ds.model_scores(model) > threshold
        return np.where(flagged, ds.outcomes - ratio * (1.0 - ds.outcomes), 0.0)

    def fn(ds: EvaluationDataset) -> float:
        c = contributions(ds)
        return float(np.dot(ds.weights, c) / np.sum(ds.weights))

    return Statistic(name=f"nb[{model}@{threshold:g}]", fn=fn, contributions=contributions)


def cnb_statistic(model: str, spec: WeightSpec, config: QuadConfig | None = None) -> Statistic:
    """Continuous net benefit of a model under a fixed weighting."""

    def contributions(ds: EvaluationDataset) -> np.ndarray:
        return subject_contributions(ds, model, spec, config)

    def fn(ds: EvaluationDataset) -> float:
        c = contributions(ds)
        return float(np.dot(ds.weights, c) / np.sum(ds.weights))

    return Statistic(name=f"cnb[{model}]", fn=fn, contributions=contributions)


def cnb_difference_statistic(
    model1: str, model2: str, spec: WeightSpec, config: QuadConfig | None = None
) -> Statistic:
    """CNB(model1) - CNB(model2) under a fixed weighting (uniform allowed)."""

    if isinstance(spec, UniformWeight):

        def contributions(ds: EvaluationDataset) -> np.ndarray:
            f1 = ds.model_scores(model1)
            f2 = ds.model_scores(model2)
            y = ds.outcomes
            return spec.level * (
                y * np.log(f1 / f2) + (1.0 - y) * np.log((1.0 - f1) / (1.0 - f2))
            )

    else:

        def contributions(ds: EvaluationDataset) -> np.ndarray:
            return subject_contributions(ds, model1, spec, config) - subject_contributions(
                ds, model2, spec, config
            )

    def fn(ds: EvaluationDataset) -> float:
        c = contributions(ds)
        return float(np.dot(ds.weights, c) / np.sum(ds.weights))

    return Statistic(name=f"cnb_diff[{model1}-{model2}]", fn=fn, contributions=contributions)


def scored_cnb(spec: WeightSpec, config: QuadConfig | None = None):
    """(scores, dataset) -> CNB evaluator for optimism correction."""
    cw = cumulative(spec, config)

    def evaluate(scores: np.ndarray, ds: EvaluationDataset) -> float:
        scores = np.asarray(scores, dtype=np.float64)
        return _kernels.weighted_score_sum(ds.weights, ds.outcomes, cw.w1(scores), cw.w0(scores))

    return evaluate
