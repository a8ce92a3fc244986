"""Threshold-weighting functions and their cumulative integrals.

A weighting assigns every decision threshold t in (0, 1) an importance
w(t) >= 0.  The continuous net benefit integrates the rescaled net-benefit
curve against it, which reduces per subject to the two cumulative integrals

    W1(x) = integral of w(t)/t     over (0, x]
    W0(x) = integral of w(t)/(1-t) over (0, x]

Point masses have no density and are represented directly through W1/W0.
W1 can diverge at 0 (any weighting with w(0+) > 0, e.g. uniform); such
weightings only support differences between models unless an explicit
lower cutoff is configured.  W0 similarly diverges at 1 for weightings
with w(1-) > 0, which only matters when it is evaluated at x = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from netbenefit.errors import (
    DivergentIntegralError,
    NoDensityError,
    NumericError,
    ValidationError,
)
from netbenefit.quadrature import CumulativeIntegral, QuadConfig, integrate_segment, tail_to_zero

UNNORMALIZED = "unnormalized"
COMBINED_TRUE_POSITIVES = "combined-true-positives"
AVERAGED_TRUE_POSITIVES = "averaged-true-positives"

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class TabulatedCurve:
    """Piecewise-linear curve on a strictly ascending grid inside (0, 1).

    Linear between grid points, constant beyond them.  A single-point grid
    is a constant.
    """

    grid: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        values = tuple(float(v) for v in self.values)
        if len(grid) != len(values) or not grid:
            raise ValidationError("curve grid and values must be equal-length and nonempty")
        if any(not 0.0 < g < 1.0 for g in grid):
            raise ValidationError("curve grid points must lie strictly inside (0, 1)")
        if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
            raise ValidationError("curve grid must be strictly ascending")
        if any(not math.isfinite(v) for v in values):
            raise ValidationError("curve values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=np.float64), self.grid, self.values)

    @classmethod
    def constant(cls, value: float) -> "TabulatedCurve":
        return cls(grid=(0.5,), values=(float(value),))

    def to_dict(self) -> dict:
        return {"grid": list(self.grid), "values": list(self.values)}


def as_curve(curve) -> TabulatedCurve:
    """Coerce a number, (grid, values) mapping, or curve into a TabulatedCurve."""
    if isinstance(curve, TabulatedCurve):
        return curve
    if isinstance(curve, (int, float)):
        return TabulatedCurve.constant(curve)
    if isinstance(curve, dict):
        extra = set(curve) - {"grid", "values"}
        if extra:
            raise ValidationError(f"unknown curve keys {sorted(extra)}")
        return TabulatedCurve(grid=tuple(curve["grid"]), values=tuple(curve["values"]))
    raise ValidationError(f"cannot interpret {curve!r} as a curve")


def harmonic_weight(tp_benefit: float, fp_harm: float) -> float:
    """Harmonic mean of the benefit of a true positive and of avoiding a
    false positive: 1 / (1/tp_benefit + 1/fp_harm)."""
    if tp_benefit <= 0 or fp_harm <= 0:
        raise ValidationError("harmonic weight requires strictly positive utilities")
    return tp_benefit * fp_harm / (tp_benefit + fp_harm)


def _harmonic_vec(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if np.any(a < 0) or np.any(b < 0):
        raise ValidationError("utility curves must be nonnegative")
    total = a + b
    return np.divide(a * b, total, out=np.zeros_like(total), where=total > 0)


# ---------------------------------------------------------------------------
# weight specifications


@dataclass(frozen=True)
class WeightSpec:
    """Base class: a declarative, immutable weighting over thresholds."""

    unit: str = field(default=UNNORMALIZED, kw_only=True)

    variant = ""

    # -- pointwise density -------------------------------------------------
    def value(self, t):
        """w(t) for t strictly inside (0, 1); undefined if point masses exist."""
        if self.atoms():
            raise NoDensityError(
                f"{self.variant} weighting contains point masses and has no "
                "pointwise density; evaluate its cumulative integrals W1/W0 instead"
            )
        t = np.asarray(t, dtype=np.float64)
        if np.any(t <= 0.0) or np.any(t >= 1.0):
            raise ValidationError("weight is defined on thresholds strictly inside (0, 1)")
        return self._density(t)

    def _density(self, t):
        raise NotImplementedError

    def atoms(self) -> tuple[tuple[float, float], ...]:
        """Point-mass components as (location, mass) pairs."""
        return ()

    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the density is not smooth."""
        return ()

    # -- scaling / serialization -------------------------------------------
    def scaled_by(self, factor: float) -> "WeightSpec":
        raise NotImplementedError

    def to_dict(self) -> dict:
        out = {"variant": self.variant}
        for f in fields(self):
            if f.name == "unit":
                if self.unit != UNNORMALIZED:
                    out["unit"] = self.unit
                continue
            v = getattr(self, f.name)
            if isinstance(v, WeightSpec):
                v = v.to_dict()
            elif isinstance(v, TabulatedCurve):
                v = v.to_dict()
            elif isinstance(v, tuple):
                v = [c.to_dict() if isinstance(c, WeightSpec) else c for c in v]
            out[f.name] = v
        return out

    # -- cumulative machinery ----------------------------------------------
    def _closed_cumulative(self, lo: float, hi: float, config: QuadConfig):
        """(w1, w0) callables for the smooth part, or None to use quadrature."""
        return None

    def _w1_integrand(self, t):
        return self._density(t) / t

    def _w0_integrand(self, t):
        return self._density(t) / (1.0 - t)

    def _w0_integrand_complement(self, u):
        # w0 integrand at t = 1-u with the singular factor taken from u
        # directly; used when sweeping toward t=1, where 1-t quantizes
        return self._density(1.0 - np.asarray(u, dtype=np.float64)) / u

    # does the w1/w0 integrand carry a 1/t (resp. 1/(1-t)) factor?
    _w1_singular = True
    _w0_singular = True


@dataclass(frozen=True)
class PointMassWeight(WeightSpec):
    """All importance concentrated at a single threshold."""

    t_star: float
    mass: float = 1.0

    variant = "point_mass"

    def __post_init__(self):
        if not 0.0 < self.t_star < 1.0:
            raise ValidationError(f"point mass location {self.t_star!r} must be inside (0, 1)")
        if not self.mass > 0:
            raise ValidationError(f"point mass must be positive, got {self.mass!r}")

    def atoms(self):
        return ((self.t_star, self.mass),)

    def _density(self, t):
        return np.zeros_like(np.asarray(t, dtype=np.float64))

    def scaled_by(self, factor):
        return replace(self, mass=self.mass * factor)

    def _closed_cumulative(self, lo, hi, config):
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=np.float64))
        return zero, zero


@dataclass(frozen=True)
class UniformWeight(WeightSpec):
    """Equal importance at every threshold.  W1 diverges at 0 and W0 at 1,
    so on the full domain this weighting only supports model differences."""

    level: float = 1.0

    variant = "uniform"

    def __post_init__(self):
        if not self.level > 0:
            raise ValidationError("uniform level must be positive")

    def _density(self, t):
        return np.full_like(np.asarray(t, dtype=np.float64), self.level)

    def scaled_by(self, factor):
        return replace(self, level=self.level * factor)

    def _closed_cumulative(self, lo, hi, config):
        if lo == 0.0:
            raise DivergentIntegralError(
                "uniform weighting: W1 = integral of level/t diverges at t=0; "
                "configure a lower cutoff or compare models via cnb_difference",
                endpoint=0.0,
            )
        level = self.level

        def w1(x):
            return level * (np.log(x) - math.log(lo))

        def w0(x):
            x = np.asarray(x, dtype=np.float64)
            if np.any(x >= 1.0):
                raise DivergentIntegralError(
                    "uniform weighting: W0 diverges at t=1; configure an upper cutoff",
                    endpoint=1.0,
                )
            return level * (math.log(1.0 - lo) - np.log(1.0 - x))

        return w1, w0


@dataclass(frozen=True)
class ParabolaWeight(WeightSpec):
    """w(t) = scale * t * (1 - t); the weighting whose net-benefit integral
    reproduces (half) the complement of the Brier score."""

    scale: float = 1.0

    variant = "parabola"

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError("parabola scale must be positive")

    def _density(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.scale * t * (1.0 - t)

    def scaled_by(self, factor):
        return replace(self, scale=self.scale * factor)

    def _closed_cumulative(self, lo, hi, config):
        scale = self.scale
        base1 = lo - lo * lo / 2.0
        base0 = lo * lo / 2.0

        def w1(x):  # integral of scale*(1-t)
            x = np.asarray(x, dtype=np.float64)
            return scale * ((x - x * x / 2.0) - base1)

        def w0(x):  # integral of scale*t
            x = np.asarray(x, dtype=np.float64)
            return scale * (x * x / 2.0 - base0)

        return w1, w0


@dataclass(frozen=True)
class TruncatedGaussianWeight(WeightSpec):
    """Gaussian-bell importance restricted to [lower, upper].

    The density is the plain normal pdf (not renormalized after truncation);
    rescale with ``normalize`` when a unit is needed.  With ``lower == 0``
    the pdf is still positive at 0+, so W1 needs an explicit lower cutoff.
    """

    mean: float
    sd: float
    lower: float = 0.0
    upper: float = 1.0
    scale: float = 1.0

    variant = "truncated_gaussian"

    def __post_init__(self):
        if not self.sd > 0:
            raise ValidationError("gaussian sd must be positive")
        if not 0.0 <= self.lower < self.upper <= 1.0:
            raise ValidationError("gaussian truncation must satisfy 0 <= lower < upper <= 1")
        if not self.scale > 0:
            raise ValidationError("scale must be positive")

    def _density(self, t):
        t = np.asarray(t, dtype=np.float64)
        z = (t - self.mean) / self.sd
        pdf = self.scale * np.exp(-0.5 * z * z) / (self.sd * _SQRT_2PI)
        return np.where((t >= self.lower) & (t <= self.upper), pdf, 0.0)

    def breakpoints(self):
        return tuple(b for b in (self.lower, self.upper) if 0.0 < b < 1.0)

    def scaled_by(self, factor):
        return replace(self, scale=self.scale * factor)


@dataclass(frozen=True)
class LogNormalDensity(WeightSpec):
    """Log-normal threshold density parameterized by the mean and standard
    deviation of the threshold variable itself (moment inversion gives the
    underlying normal parameters)."""

    mean: float
    sd: float
    scale: float = 1.0

    variant = "log_normal_density"

    def __post_init__(self):
        if not (self.mean > 0 and self.sd > 0 and self.scale > 0):
            raise ValidationError("log-normal mean, sd, and scale must be positive")

    @property
    def log_sigma(self) -> float:
        return math.sqrt(math.log1p((self.sd / self.mean) ** 2))

    @property
    def log_mu(self) -> float:
        return math.log(self.mean) - self.log_sigma**2 / 2.0

    def _density(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        pos = t > 0.0
        z = (np.log(t, where=pos, out=np.full_like(t, -np.inf)) - self.log_mu) / self.log_sigma
        np.divide(
            self.scale * np.exp(-0.5 * z * z),
            t * self.log_sigma * _SQRT_2PI,
            out=out,
            where=pos,
        )
        return out

    def scaled_by(self, factor):
        return replace(self, scale=self.scale * factor)


@dataclass(frozen=True)
class TabulatedWeight(WeightSpec):
    """Weight given by a piecewise-linear curve (constant beyond the grid)."""

    curve: TabulatedCurve

    variant = "tabulated"

    def __post_init__(self):
        curve = as_curve(self.curve)
        if any(v < 0 for v in curve.values):
            raise ValidationError("tabulated weight values must be nonnegative")
        object.__setattr__(self, "curve", curve)

    def _density(self, t):
        return self.curve(t)

    def breakpoints(self):
        return self.curve.grid

    def scaled_by(self, factor):
        scaled = TabulatedCurve(
            grid=self.curve.grid, values=tuple(v * factor for v in self.curve.values)
        )
        return replace(self, curve=scaled)

    def _closed_cumulative(self, lo, hi, config):
        grid, values = self.curve.grid, self.curve.values
        if lo == 0.0 and values[0] > 0.0:
            raise DivergentIntegralError(
                "tabulated weighting: w(0+) > 0 makes W1 diverge at t=0; "
                "configure a lower cutoff or start the curve at 0",
                endpoint=0.0,
            )
        knots = np.asarray([lo] + [g for g in grid if lo < g < hi] + [hi])
        mids = (knots[:-1] + knots[1:]) / 2.0
        slopes = np.empty(mids.size)
        intercepts = np.empty(mids.size)
        for k, mid in enumerate(mids):
            idx = int(np.searchsorted(grid, mid))
            if idx == 0 or idx == len(grid):
                slopes[k] = 0.0
                intercepts[k] = values[0] if idx == 0 else values[-1]
            else:
                slopes[k] = (values[idx] - values[idx - 1]) / (grid[idx] - grid[idx - 1])
                intercepts[k] = values[idx - 1] - slopes[k] * grid[idx - 1]

        def anti_w1(slope, intercept, t):
            # antiderivative of (intercept + slope*t)/t; segments touching 0
            # have intercept 0 (checked above), so mask the log there
            safe_log = np.log(np.maximum(t, 5e-324))
            return np.where(intercept == 0.0, 0.0, intercept * safe_log) + slope * t

        def anti_w0(slope, intercept, t):
            # antiderivative of (intercept + slope*t)/(1-t)
            top = intercept + slope
            with np.errstate(divide="ignore", invalid="ignore"):
                log_term = np.where(top == 0.0, 0.0, -top * np.log1p(-t))
            return log_term - slope * t

        def build(anti, endpoint):
            # integral from lo up to each segment start, in closed form
            starts = np.zeros(knots.size - 1)
            for k in range(1, knots.size - 1):
                piece = anti(slopes[k - 1], intercepts[k - 1], knots[k]) - anti(
                    slopes[k - 1], intercepts[k - 1], knots[k - 1]
                )
                starts[k] = starts[k - 1] + piece

            def evaluate(x):
                xs = np.clip(np.asarray(x, dtype=np.float64), lo, hi)
                k = np.clip(np.searchsorted(knots, xs, side="right") - 1, 0, knots.size - 2)
                out = starts[k] + anti(slopes[k], intercepts[k], xs) - anti(
                    slopes[k], intercepts[k], knots[k]
                )
                if not np.all(np.isfinite(out)):
                    raise DivergentIntegralError(
                        f"tabulated weighting integral diverges at t={endpoint:g}; "
                        "configure a cutoff on that side",
                        endpoint=endpoint,
                    )
                return out

            return evaluate

        return build(anti_w1, 0.0), build(anti_w0, 1.0)


@dataclass(frozen=True)
class HarmonicUtilityWeight(WeightSpec):
    """Importance from utilities: the harmonic mean of the true-positive
    benefit curve and the false-positive harm curve, optionally multiplied
    by a threshold density."""

    tp_benefit: TabulatedCurve
    fp_harm: TabulatedCurve
    density: WeightSpec | None = None
    scale: float = 1.0

    variant = "harmonic_utilities"

    def __post_init__(self):
        object.__setattr__(self, "tp_benefit", as_curve(self.tp_benefit))
        object.__setattr__(self, "fp_harm", as_curve(self.fp_harm))
        if any(v < 0 for v in self.tp_benefit.values) or any(
            v < 0 for v in self.fp_harm.values
        ):
            raise ValidationError("utility curves must be nonnegative")
        if not self.scale > 0:
            raise ValidationError("scale must be positive")

    def _harmonic(self, t):
        return _harmonic_vec(self.tp_benefit(t), self.fp_harm(t))

    def _density(self, t):
        t = np.asarray(t, dtype=np.float64)
        base = self.density._density(t) if self.density is not None else 1.0
        return self.scale * base * self._harmonic(t)

    def atoms(self):
        if self.density is None:
            return ()
        return tuple(
            (t, m * self.scale * float(self._harmonic(t))) for t, m in self.density.atoms()
        )

    def breakpoints(self):
        inherited = self.density.breakpoints() if self.density is not None else ()
        return tuple(sorted(set(self.tp_benefit.grid) | set(self.fp_harm.grid) | set(inherited)))

    def scaled_by(self, factor):
        return replace(self, scale=self.scale * factor)


@dataclass(frozen=True)
class ConstantTpBenefitWeight(WeightSpec):
    """w(t) = density(t) * t: a threshold distribution under the assumption
    that every true positive is equally beneficial.  The net-benefit
    integral of this weighting is the density-weighted area under the
    (binary) net-benefit curve."""

    density: WeightSpec
    scale: float = 1.0

    variant = "constant_tp_benefit"
    _w1_singular = False

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError("scale must be positive")

    def _density(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.scale * self.density._density(t) * t

    def atoms(self):
        return tuple((t, m * self.scale * t) for t, m in self.density.atoms())

    def breakpoints(self):
        return self.density.breakpoints()

    def scaled_by(self, factor):
        return replace(self, scale=self.scale * factor)

    def _w1_integrand(self, t):  # the 1/t factor cancels exactly
        return self.scale * self.density._density(t)

    def _w0_integrand(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.scale * self.density._density(t) * t / (1.0 - t)

    def _w0_integrand_complement(self, u):
        u = np.asarray(u, dtype=np.float64)
        return self.scale * self.density._density(1.0 - u) * (1.0 - u) / u


@dataclass(frozen=True)
class ConstantFpHarmWeight(WeightSpec):
    """w(t) = density(t) * (1 - t): a threshold distribution under the
    assumption that every false positive is equally harmful."""

    density: WeightSpec
    scale: float = 1.0

    variant = "constant_fp_harm"
    _w0_singular = False

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError("scale must be positive")

    def _density(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.scale * self.density._density(t) * (1.0 - t)

    def atoms(self):
        return tuple((t, m * self.scale * (1.0 - t)) for t, m in self.density.atoms())

    def breakpoints(self):
        return self.density.breakpoints()

    def scaled_by(self, factor):
        return replace(self, scale=self.scale * factor)

    def _w1_integrand(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.scale * self.density._density(t) * (1.0 - t) / t

    def _w0_integrand(self, t):  # the 1/(1-t) factor cancels exactly
        return self.scale * self.density._density(t)


@dataclass(frozen=True)
class MixtureWeight(WeightSpec):
    """Sum of component weightings (e.g. a density plus point masses)."""

    components: tuple[WeightSpec, ...]

    variant = "mixture"

    def __post_init__(self):
        if not self.components:
            raise ValidationError("mixture needs at least one component")
        object.__setattr__(self, "components", tuple(self.components))

    def _density(self, t):
        return sum(c._density(t) for c in self.components)

    def atoms(self):
        return tuple(a for c in self.components for a in c.atoms())

    def breakpoints(self):
        return tuple(sorted({b for c in self.components for b in c.breakpoints()}))

    def scaled_by(self, factor):
        return replace(self, components=tuple(c.scaled_by(factor) for c in self.components))


_VARIANTS = {
    cls.variant: cls
    for cls in (
        PointMassWeight,
        UniformWeight,
        ParabolaWeight,
        TruncatedGaussianWeight,
        LogNormalDensity,
        TabulatedWeight,
        HarmonicUtilityWeight,
        ConstantTpBenefitWeight,
        ConstantFpHarmWeight,
        MixtureWeight,
    )
}


def spec_from_dict(data: dict) -> WeightSpec:
    """Build a WeightSpec from its JSON form; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ValidationError(f"weight spec must be a JSON object, got {data!r}")
    data = dict(data)
    variant = data.pop("variant", None)
    if variant not in _VARIANTS:
        raise ValidationError(
            f"unknown weight variant {variant!r}; expected one of {sorted(_VARIANTS)}"
        )
    cls = _VARIANTS[variant]
    names = {f.name for f in fields(cls)}
    extra = set(data) - names
    if extra:
        raise ValidationError(f"unknown keys {sorted(extra)} for weight variant {variant!r}")
    kwargs = {}
    for key, value in data.items():
        if key in ("density",) and value is not None:
            value = spec_from_dict(value)
        elif key == "components":
            value = tuple(spec_from_dict(c) for c in value)
        elif key in ("tp_benefit", "fp_harm"):
            value = as_curve(value)
        elif key == "curve":
            value = as_curve(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ValidationError(f"invalid weight spec for {variant!r}: {exc}") from None


def weight_value(spec: WeightSpec, t: float) -> float:
    """w(t) for a weighting with a pointwise density."""
    return float(spec.value(t))


# ---------------------------------------------------------------------------
# cumulative integrals


@dataclass(frozen=True)
class CumulativeWeights:
    """Evaluable W1/W0 with a tag describing how they are computed."""

    method: str
    tolerance: float
    domain: tuple[float, float]
    _w1: object
    _w0: object

    def w1(self, x):
        return self._w1(x)

    def w0(self, x):
        return self._w0(x)


def _clipped(fn, lo, hi):
    def evaluate(x):
        return fn(np.clip(np.asarray(x, dtype=np.float64), lo, hi))

    return evaluate


def _atom_sum(atoms, denom_fn):
    def evaluate(x):
        xs = np.asarray(x, dtype=np.float64)
        total = np.zeros_like(xs, dtype=np.float64)
        for t_star, mass in atoms:
            total = total + np.where(xs > t_star, mass / denom_fn(t_star), 0.0)
        if xs.ndim == 0:
            return float(total)
        return total

    return evaluate


def cumulative(spec: WeightSpec, config: QuadConfig | None = None) -> CumulativeWeights:
    """Build the cumulative integrals W1(x), W0(x) of a weighting.

    Closed forms are used where available (point masses, parabola, uniform
    with a cutoff, tabulated segments); everything else falls back to
    composite Simpson per smooth segment.  Raises DivergentIntegralError at
    construction when W1 cannot exist on the configured domain.
    """
    config = config or QuadConfig()
    lo, hi = config.domain()

    if isinstance(spec, MixtureWeight):
        parts = [cumulative(c, config) for c in spec.components]
        methods = {p.method for p in parts}
        method = methods.pop() if len(methods) == 1 else "mixed"

        def w1(x):
            return sum(p.w1(x) for p in parts)

        def w0(x):
            return sum(p.w0(x) for p in parts)

        return CumulativeWeights(
            method=method, tolerance=config.rel_tol, domain=(lo, hi), _w1=w1, _w0=w0
        )

    atoms = tuple((t, m) for t, m in spec.atoms() if lo <= t < hi)
    atom_w1 = _atom_sum(atoms, lambda t: t)
    atom_w0 = _atom_sum(atoms, lambda t: 1.0 - t)

    closed = spec._closed_cumulative(lo, hi, config)
    if closed is not None:
        smooth_w1, smooth_w0 = (_clipped(fn, lo, hi) for fn in closed)
        method = "closed-form"
    else:
        smooth_w1 = CumulativeIntegral(
            spec._w1_integrand,
            spec.breakpoints(),
            lo,
            hi,
            config,
            near_zero=spec._w1_singular,
            near_one=False,
        )
        smooth_w0 = CumulativeIntegral(
            spec._w0_integrand,
            spec.breakpoints(),
            lo,
            hi,
            config,
            near_zero=False,
            near_one=spec._w0_singular,
            g_complement=spec._w0_integrand_complement,
        )
        method = "quadrature"
        if lo == 0.0 and spec._w1_singular:
            # probe now so divergent weightings fail at construction
            smooth_w1(min(1e-3, (lo + hi) / 2.0))

    def w1(x):
        return smooth_w1(np.asarray(x, dtype=np.float64)) + atom_w1(x)

    def w0(x):
        return smooth_w0(np.asarray(x, dtype=np.float64)) + atom_w0(x)

    return CumulativeWeights(
        method=method, tolerance=config.rel_tol, domain=(lo, hi), _w1=w1, _w0=w0
    )


def total_mass(spec: WeightSpec, config: QuadConfig | None = None) -> float:
    """Plain integral of the weighting over its domain plus point masses."""
    config = config or QuadConfig()
    lo, hi = config.domain()
    atoms = math.fsum(m for t, m in spec.atoms() if lo <= t < hi)
    breaks = [b for b in spec.breakpoints() if lo < b < hi]
    knots = [lo] + breaks + [hi]
    smooth = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        if a == 0.0:
            smooth += tail_to_zero(spec._density, b, config)
        else:
            smooth += integrate_segment(spec._density, a, b, config)
    return smooth + atoms


def normalize(
    spec: WeightSpec,
    config: QuadConfig | None = None,
    unit: str = COMBINED_TRUE_POSITIVES,
) -> WeightSpec:
    """Rescale so that W1(1) = 1, giving the net benefit an interpretable
    unit (one combined true positive)."""
    cw = cumulative(spec, config)
    total = float(cw.w1(1.0))
    if not math.isfinite(total):
        raise DivergentIntegralError("W1(1) is not finite; cannot normalize", endpoint=1.0)
    if total <= 0.0:
        raise NumericError(f"W1(1) = {total!r}; normalization needs a positive total")
    scaled = spec.scaled_by(1.0 / total)
    return replace(scaled, unit=unit)


def example_weights(normalized: bool = True, epsilon: float = 1e-6) -> dict[str, WeightSpec]:
    """Worked-example weightings for cardiovascular prevention decisions.

    ``lifestyle``: half-Gaussian importance rising toward the 10% statin
    threshold (mean 0.10, sd 0.02, support below 0.10).  Its density is
    positive at 0+, so the support is truncated at ``epsilon`` to keep W1
    finite.  ``statins``: a point mass at the 10% threshold.
    ``threshold_density``: a log-normal distribution of optimal thresholds
    (mean 0.10, sd 0.03) under constant false-positive harm.
    """
    lifestyle: WeightSpec = TruncatedGaussianWeight(mean=0.10, sd=0.02, lower=epsilon, upper=0.10)
    statins: WeightSpec = PointMassWeight(t_star=0.10, mass=1.0)
    density: WeightSpec = ConstantFpHarmWeight(density=LogNormalDensity(mean=0.10, sd=0.03))
    if normalized:
        lifestyle = normalize(lifestyle)
        statins = normalize(statins)
        density = normalize(density, unit=AVERAGED_TRUE_POSITIVES)
    return {"lifestyle": lifestyle, "statins": statins, "threshold_density": density}
