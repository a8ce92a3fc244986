"""Brute-force utility oracles over synthetic populations.

Each individual carries its own utilities (a, b, c, d) for the four
classification outcomes, hence its own optimal threshold
t* = (d-b) / ((a-c) + (d-b)).  Averaging the brute-force utility over all
permutations of (score, outcome, weight) records against fixed
(utility, t*) records enforces the independence assumption exactly at
finite sample size, and the permutation mean must then match the
harmonic-weighted expected net benefit to floating-point accuracy.  That
identity, plus a searched counterexample showing the two fixed-utility
area summaries can rank models in opposite orders, is this module's reason
to exist.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from netbenefit import _kernels
from netbenefit.continuous import aunb, aunb_alt
from netbenefit.dataset import EvaluationDataset
from netbenefit.errors import ValidationError
from netbenefit.logistic import expit
from netbenefit.weighting import MixtureWeight, PointMassWeight, as_curve

_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class UtilityPopulation:
    """Subjects with per-individual utilities and derived optimal thresholds.

    Requires a > c (true positives help) and d > b (false positives hurt)
    for every individual, and t_star consistent with the utilities.
    """

    scores: dict[str, np.ndarray]
    outcomes: np.ndarray
    weights: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    t_star: np.ndarray
    group: np.ndarray | None = None

    def __post_init__(self):
        arrays = {name: np.asarray(getattr(self, name), dtype=np.float64) for name in "abcd"}
        t = np.asarray(self.t_star, dtype=np.float64)
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "t_star", t)
        if np.any(arrays["a"] <= arrays["c"]):
            raise ValidationError("every individual needs a > c (beneficial true positives)")
        if np.any(arrays["d"] <= arrays["b"]):
            raise ValidationError("every individual needs d > b (harmful false positives)")
        implied = (arrays["d"] - arrays["b"]) / (
            (arrays["a"] - arrays["c"]) + (arrays["d"] - arrays["b"])
        )
        if np.any(np.abs(implied - t) > _CONSISTENCY_TOL):
            worst = int(np.argmax(np.abs(implied - t)))
            raise ValidationError(
                f"t_star of individual {worst} ({float(t[worst]):.6g}) is inconsistent "
                f"with its utilities (implied {float(implied[worst]):.6g})"
            )
        if np.any((t <= 0.0) | (t >= 1.0)):
            raise ValidationError("optimal thresholds must lie strictly inside (0, 1)")

    @property
    def n(self) -> int:
        return int(self.outcomes.shape[0])

    def dataset(self) -> EvaluationDataset:
        return EvaluationDataset(scores=self.scores, outcomes=self.outcomes, weights=self.weights)

    def harmonic_importance(self) -> np.ndarray:
        """Per-individual harmonic mean of (a-c) and (d-b).

        Equal to (a-c)*t_star by the threshold identity; this is the h in
        a-c = h/t*, d-b = h/(1-t*).
        """
        tp_benefit = self.a - self.c
        fp_harm = self.d - self.b
        return tp_benefit * fp_harm / (tp_benefit + fp_harm)

    def importance_spec(self) -> MixtureWeight:
        """The empirical expected-net-benefit weighting: one point mass per
        individual at its threshold, massed by harmonic importance / n."""
        h = self.harmonic_importance()
        return MixtureWeight(
            components=tuple(
                PointMassWeight(t_star=float(t), mass=float(m / self.n))
                for t, m in zip(self.t_star, h)
            )
        )


# ---------------------------------------------------------------------------
# generation


@dataclass(frozen=True)
class FixedThresholds:
    """Discrete threshold distribution (optionally non-uniform)."""

    values: tuple[float, ...]
    probabilities: tuple[float, ...] | None = None

    def __post_init__(self):
        if any(not 0.0 < v < 1.0 for v in self.values):
            raise ValidationError("thresholds must lie strictly inside (0, 1)")
        if self.probabilities is not None and len(self.probabilities) != len(self.values):
            raise ValidationError("probabilities must match values")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.choice(np.asarray(self.values), size=n, p=self.probabilities)


@dataclass(frozen=True)
class UniformThresholds:
    lower: float = 0.05
    upper: float = 0.95

    def __post_init__(self):
        if not 0.0 < self.lower < self.upper < 1.0:
            raise ValidationError("threshold support must lie strictly inside (0, 1)")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=n)


@dataclass(frozen=True)
class TruncatedNormalThresholds:
    mean: float
    sd: float
    lower: float = 0.01
    upper: float = 0.99

    def __post_init__(self):
        if not 0.0 < self.lower < self.upper < 1.0:
            raise ValidationError("threshold support must lie strictly inside (0, 1)")
        if self.sd <= 0:
            raise ValidationError("sd must be positive")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        out = np.empty(n)
        filled = 0
        while filled < n:
            draw = rng.normal(self.mean, self.sd, size=2 * (n - filled) + 16)
            keep = draw[(draw > self.lower) & (draw < self.upper)][: n - filled]
            out[filled : filled + keep.size] = keep
            filled += keep.size
        return out


@dataclass(frozen=True)
class GeneratorConfig:
    """Recipe for a synthetic utility population.

    Scores come from logistic models over 1-3 standard-normal features;
    outcomes are Bernoulli draws from the designated generating model.
    Utilities are built from t* via an importance scale h(t*) and baseline
    curves for the untreated outcomes:  a = c + h/t*, b = d - h/(1-t*),
    which keeps every individual's threshold exactly consistent.
    """

    n: int
    thresholds: object = field(default_factory=UniformThresholds)
    importance_scale: object = 1.0
    baseline_event: object = 0.0
    baseline_no_event: object = 0.0
    model_coefficients: dict[str, tuple[float, ...]] = field(
        default_factory=lambda: {"full": (-1.0, 1.0, 0.8), "compact": (-1.0, 1.0, 0.0)}
    )
    outcome_model: str | None = None
    n_features: int = 2
    seed: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("population size must be positive")
        if not 1 <= self.n_features <= 3:
            raise ValidationError("generator supports 1 to 3 synthetic features")
        for name, coefs in self.model_coefficients.items():
            if len(coefs) != self.n_features + 1:
                raise ValidationError(
                    f"model {name!r} needs {self.n_features + 1} coefficients "
                    "(intercept first)"
                )
        if self.outcome_model is not None and self.outcome_model not in self.model_coefficients:
            raise ValidationError(f"unknown outcome model {self.outcome_model!r}")


def _curve_values(curve, t: np.ndarray) -> np.ndarray:
    if isinstance(curve, (int, float)):
        return np.full_like(t, float(curve))
    return as_curve(curve)(t)


def generate_population(config: GeneratorConfig) -> UtilityPopulation:
    """Draw a population satisfying the independence assumption by
    construction: thresholds and utilities are sampled independently of the
    scores and outcomes.  Deterministic given the seed."""
    rng = np.random.default_rng(config.seed)
    X = rng.standard_normal((config.n, config.n_features))
    scores = {
        name: expit(coefs[0] + X @ np.asarray(coefs[1:]))
        for name, coefs in config.model_coefficients.items()
    }
    outcome_source = config.outcome_model or next(iter(config.model_coefficients))
    outcomes = (rng.random(config.n) < scores[outcome_source]).astype(np.float64)

    t_star = config.thresholds.sample(rng, config.n)
    h = _curve_values(config.importance_scale, t_star)
    if np.any(h <= 0):
        raise ValidationError("importance scale must be positive on the threshold support")
    c = _curve_values(config.baseline_event, t_star)
    d = _curve_values(config.baseline_no_event, t_star)
    a = c + h / t_star
    b = d - h / (1.0 - t_star)
    return UtilityPopulation(
        scores=scores,
        outcomes=outcomes,
        weights=np.ones(config.n),
        a=a,
        b=b,
        c=c,
        d=d,
        t_star=t_star,
    )


# ---------------------------------------------------------------------------
# brute force and the permutation identity


def brute_force_utility(pop: UtilityPopulation, model: str) -> float:
    """Weighted mean utility when each subject is treated iff its score is
    strictly above its own threshold."""
    if model not in pop.scores:
        raise ValidationError(f"unknown model {model!r}")
    total = _kernels.brute_utility_sum(
        pop.scores[model], pop.t_star, pop.outcomes, pop.weights, pop.a, pop.b, pop.c, pop.d
    )
    return total / float(np.sum(pop.weights))


def expected_net_benefit_discrete(pop: UtilityPopulation, model: str) -> float:
    """Expected net benefit with the empirical threshold distribution:
    (1/n) * sum_j h_j * [TP(t*_j)/t*_j - FP(t*_j)/(1-t*_j)] with weighted
    TP/FP curves and harmonic importance h_j."""
    from netbenefit.confusion import sweep

    curve = sweep(pop.dataset(), model)
    h = pop.harmonic_importance()
    t = pop.t_star
    terms = h * (curve.tp(t) / t - curve.fp(t) / (1.0 - t))
    return math.fsum(terms.tolist()) / pop.n


def _permuted_delta(pop: UtilityPopulation, model1: str, model2: str, order: np.ndarray) -> float:
    f1 = pop.scores[model1][order]
    f2 = pop.scores[model2][order]
    y = pop.outcomes[order]
    w = pop.weights[order]
    total_w = float(np.sum(pop.weights))
    u1 = _kernels.brute_utility_sum(f1, pop.t_star, y, w, pop.a, pop.b, pop.c, pop.d)
    u2 = _kernels.brute_utility_sum(f2, pop.t_star, y, w, pop.a, pop.b, pop.c, pop.d)
    return (u1 - u2) / total_w


@dataclass(frozen=True)
class OracleReport:
    mode: str
    n: int
    permutations: int
    delta_utility: float
    expected_delta: float
    error: float
    tolerance: float
    std_error: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "permutations": self.permutations,
            "delta_utility": self.delta_utility,
            "expected_delta": self.expected_delta,
            "error": self.error,
            "tolerance": self.tolerance,
            "std_error": self.std_error,
            "passed": self.passed,
        }


def verify_expected_nb(
    pop: UtilityPopulation,
    model1: str,
    model2: str,
    tolerance: float | None = None,
    mode: str = "exhaustive",
    permutations: int = 200,
    seed: int | None = None,
) -> OracleReport:
    """Check the permutation mean of brute-force utility differences against
    the harmonic-weighted expected net benefit.

    Exhaustive mode averages over every permutation of the (score, outcome,
    weight) records (population size at most 8); Monte-Carlo mode samples
    permutations and reports a standard error, defaulting the tolerance to
    three standard errors.
    """
    expected = expected_net_benefit_discrete(pop, model1) - expected_net_benefit_discrete(
        pop, model2
    )
    if mode == "exhaustive":
        if pop.n > 8:
            raise ValidationError(
                f"exhaustive mode enumerates n! permutations; n={pop.n} > 8 "
                "(use mode='monte-carlo')"
            )
        deltas = [
            _permuted_delta(pop, model1, model2, np.asarray(order))
            for order in itertools.permutations(range(pop.n))
        ]
        mean_delta = math.fsum(deltas) / len(deltas)
        tol = 1e-9 if tolerance is None else tolerance
        error = abs(mean_delta - expected)
        return OracleReport(
            mode=mode,
            n=pop.n,
            permutations=len(deltas),
            delta_utility=mean_delta,
            expected_delta=expected,
            error=error,
            tolerance=tol,
            std_error=None,
            passed=error < tol,
        )
    if mode == "monte-carlo":
        rng = np.random.default_rng(seed)
        deltas = [
            _permuted_delta(pop, model1, model2, rng.permutation(pop.n))
            for _ in range(permutations)
        ]
        mean_delta = math.fsum(deltas) / len(deltas)
        spread = float(np.std(np.asarray(deltas), ddof=1)) if len(deltas) > 1 else 0.0
        std_error = spread / math.sqrt(len(deltas))
        tol = 3.0 * std_error if tolerance is None else tolerance
        error = abs(mean_delta - expected)
        return OracleReport(
            mode=mode,
            n=pop.n,
            permutations=len(deltas),
            delta_utility=mean_delta,
            expected_delta=expected,
            error=error,
            tolerance=tol,
            std_error=std_error,
            passed=error < tol,
        )
    raise ValidationError(f"unknown mode {mode!r}; expected 'exhaustive' or 'monte-carlo'")


# ---------------------------------------------------------------------------
# disagreement witness


@dataclass(frozen=True)
class DisagreementWitness:
    """An instance where the two area summaries rank two models oppositely."""

    dataset: EvaluationDataset
    density: MixtureWeight
    model1: str
    model2: str
    aunb_margin: float
    aunb_alt_margin: float

    def to_dict(self) -> dict:
        return {
            "outcomes": self.dataset.outcomes.tolist(),
            "scores": {m: f.tolist() for m, f in self.dataset.scores.items()},
            "density": self.density.to_dict(),
            "models": [self.model1, self.model2],
            "aunb_margin": self.aunb_margin,
            "aunb_alt_margin": self.aunb_alt_margin,
        }


@dataclass(frozen=True)
class WitnessSearchConfig:
    score_grid: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    atom_grid: tuple[float, ...] = (0.15, 0.35, 0.55, 0.75)
    atom_weights: tuple[float, ...] = (0.25, 0.5, 0.75)
    outcomes: tuple[float, ...] = (1.0, 0.0, 1.0, 0.0)
    margin: float = 1e-6
    random_trials: int = 2000
    seed: int = 0


def _net_benefit_matrix(score_vectors: np.ndarray, y: np.ndarray, atoms: np.ndarray) -> np.ndarray:
    """NB at each atom threshold for every candidate score vector."""
    n = y.size
    nb = np.empty((score_vectors.shape[0], atoms.size))
    for k, t in enumerate(atoms):
        flagged = (score_vectors > t).astype(np.float64)
        tp = flagged @ y / n
        fp = flagged @ (1.0 - y) / n
        nb[:, k] = tp - t / (1.0 - t) * fp
    return nb


def aunb_disagreement_witness(
    config: WitnessSearchConfig | None = None,
) -> DisagreementWitness | None:
    """Search for a dataset + two-atom threshold density where one model has
    the higher constant-benefit area and the other the higher constant-harm
    area.  Grid search over 4-subject datasets first, then random search;
    any hit is re-verified through the integration routes before return.
    """
    config = config or WitnessSearchConfig()
    y = np.asarray(config.outcomes)
    vectors = np.asarray(
        list(itertools.product(config.score_grid, repeat=y.size)), dtype=np.float64
    )
    atoms = np.asarray(config.atom_grid)
    nb = _net_benefit_matrix(vectors, y, atoms)
    rescale = (1.0 - atoms) / atoms  # NB_alt(t) = (1-t)/t * NB(t)
    delta = nb[:, None, :] - nb[None, :, :]  # pairwise model differences

    for i_atom, j_atom in itertools.combinations(range(atoms.size), 2):
        for p in config.atom_weights:
            masses = np.array([p, 1.0 - p])
            area = masses[0] * delta[:, :, i_atom] + masses[1] * delta[:, :, j_atom]
            area_alt = (
                masses[0] * rescale[i_atom] * delta[:, :, i_atom]
                + masses[1] * rescale[j_atom] * delta[:, :, j_atom]
            )
            hits = (area > config.margin) & (area_alt < -config.margin)
            if not hits.any():
                continue
            i, j = np.argwhere(hits)[0]
            witness = _verify_witness(
                vectors[i], vectors[j], y, (atoms[i_atom], atoms[j_atom]), (p, 1.0 - p), config
            )
            if witness is not None:
                return witness

    rng = np.random.default_rng(config.seed)
    for _ in range(config.random_trials):
        f1 = np.round(rng.uniform(0.02, 0.98, y.size), 3)
        f2 = np.round(rng.uniform(0.02, 0.98, y.size), 3)
        pair = np.sort(np.round(rng.uniform(0.05, 0.95, 2), 3))
        if pair[0] == pair[1]:
            continue
        p = float(rng.choice(config.atom_weights))
        witness = _verify_witness(f1, f2, y, (pair[0], pair[1]), (p, 1.0 - p), config)
        if witness is not None:
            return witness
    return None


def _verify_witness(f1, f2, y, atom_locations, atom_masses, config) -> DisagreementWitness | None:
    ds = EvaluationDataset(
        scores={"model1": np.asarray(f1), "model2": np.asarray(f2)},
        outcomes=y,
        weights=np.ones(y.size),
    )
    density = MixtureWeight(
        components=tuple(
            PointMassWeight(t_star=float(t), mass=float(m))
            for t, m in zip(atom_locations, atom_masses)
        )
    )
    delta = aunb(ds, "model1", density) - aunb(ds, "model2", density)
    delta_alt = aunb_alt(ds, "model1", density) - aunb_alt(ds, "model2", density)
    if delta * delta_alt < 0 and min(abs(delta), abs(delta_alt)) > config.margin:
        return DisagreementWitness(
            dataset=ds,
            density=density,
            model1="model1",
            model2="model2",
            aunb_margin=abs(delta),
            aunb_alt_margin=abs(delta_alt),
        )
    return None


# ---------------------------------------------------------------------------
# two-group scenario


def two_group_scenario(
    group1_scale: float = 0.01,
    group2_scale: float = 100.0,
    group1_threshold: float = 0.10,
    group2_threshold: float = 0.11,
    n_per_group: int = 100,
    seed: int | None = 0,
) -> UtilityPopulation:
    """Half the population barely cares about the decision (tiny utilities,
    threshold at group1_threshold); for the other half it is critical
    (large utilities, group2_threshold).  Model scores are generated
    identically in both groups, so the independence assumption holds and
    the expected net benefit concentrates its weight on the second group.
    """
    n = 2 * n_per_group
    rng = np.random.default_rng(seed)
    risk = expit(rng.normal(-2.0, 1.0, size=n))
    outcomes = (rng.random(n) < risk).astype(np.float64)
    noisy = expit(np.log(risk / (1.0 - risk)) * 0.7 + rng.normal(0.0, 0.4, size=n))
    group = np.repeat([1, 2], n_per_group)
    rng.shuffle(group)  # group independent of (score, outcome)

    t_star = np.where(group == 1, group1_threshold, group2_threshold)
    h = np.where(group == 1, group1_scale, group2_scale)
    a = h / t_star
    b = -h / (1.0 - t_star)
    return UtilityPopulation(
        scores={"calibrated": risk, "noisy": noisy},
        outcomes=outcomes,
        weights=np.ones(n),
        a=a,
        b=b,
        c=np.zeros(n),
        d=np.zeros(n),
        t_star=t_star,
        group=group,
    )


def group_importance(pop: UtilityPopulation) -> dict[float, float]:
    """Expected-net-benefit weighting mass at each distinct threshold
    (empirical probability times harmonic importance)."""
    h = pop.harmonic_importance()
    out: dict[float, float] = {}
    for t, m in zip(pop.t_star, h / pop.n):
        out[float(t)] = out.get(float(t), 0.0) + float(m)
    return out


def group_delta_shares(pop: UtilityPopulation, model1: str, model2: str) -> dict[int, float]:
    """Share of |delta utility| contributed by each group label."""
    if pop.group is None:
        raise ValidationError("population has no group labels")
    contributions: dict[int, float] = {}
    for label in np.unique(pop.group):
        mask = pop.group == label
        sub = replace(
            pop,
            scores={m: f[mask] for m, f in pop.scores.items()},
            outcomes=pop.outcomes[mask],
            weights=pop.weights[mask],
            a=pop.a[mask],
            b=pop.b[mask],
            c=pop.c[mask],
            d=pop.d[mask],
            t_star=pop.t_star[mask],
            group=pop.group[mask],
        )
        delta = (
            brute_force_utility(sub, model1) - brute_force_utility(sub, model2)
        ) * float(np.sum(sub.weights))
        contributions[int(label)] = abs(delta)
    total = sum(contributions.values())
    if total == 0.0:
        return {label: 0.0 for label in contributions}
    return {label: value / total for label, value in contributions.items()}
