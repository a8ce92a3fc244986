"""Composite Simpson integration with interval halving.

Integrands here are weight functions divided by t or (1-t), so they can be
stiff or outright singular at the domain ends.  Two tactics keep plain
Simpson viable:

* segments whose endpoint sits close to 0 (or 1) are split at geometric
  (octave) points, so each piece spans a bounded dynamic range;
* an integral that actually touches an open singular endpoint is summed
  octave by octave toward it, stopping once increments are negligible and
  raising ``DivergentIntegralError`` if they refuse to decay.

The octave sweep doubles as the divergence test: a log-divergent integrand
(constant increments per octave) exhausts the octave budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from netbenefit.errors import DivergentIntegralError, NumericError, ValidationError

# never split segments geometrically further than this from a singular end
_SPLIT_REGION = 0.04


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature settings shared by all weight integrals.

    ``lower_cutoff``/``upper_cutoff`` shrink the integration domain from
    (0, 1) to [lower, upper]; they are the explicit epsilon a divergent
    weight needs before its cumulative integrals exist.
    """

    rel_tol: float = 1e-9
    max_panels: int = 1 << 20
    lower_cutoff: float | None = None
    upper_cutoff: float | None = None
    max_octaves: int = 400

    def domain(self) -> tuple[float, float]:
        lo = 0.0 if self.lower_cutoff is None else float(self.lower_cutoff)
        hi = 1.0 if self.upper_cutoff is None else float(self.upper_cutoff)
        if not 0.0 <= lo < hi <= 1.0:
            raise ValidationError(f"cutoffs must satisfy 0 <= lower < upper <= 1, got [{lo}, {hi}]")
        return lo, hi


def _simpson_fixed(g, a: float, b: float, panels: int) -> float:
    x = np.linspace(a, b, panels + 1)
    # segment ends are evaluated from inside: integrands may jump exactly at
    # segment boundaries (truncated supports, tabulated grids, score jumps)
    inset = (b - a) * 1e-13
    x[0] = max(a + inset, np.nextafter(a, b))
    x[-1] = min(b - inset, np.nextafter(b, a))
    fx = np.asarray(g(x), dtype=np.float64)
    h = (b - a) / panels
    return float((fx[0] + fx[-1] + 4.0 * fx[1:-1:2].sum() + 2.0 * fx[2:-1:2].sum()) * h / 3.0)


def simpson_refine(g, a: float, b: float, config: QuadConfig) -> float:
    """Composite Simpson on [a, b], doubling panels until two successive
    refinements agree to ``rel_tol`` (relative)."""
    if b <= a:
        return 0.0
    if b - a <= 64.0 * np.spacing(max(abs(a), abs(b))):
        # span of a few ulps: a jump at either end would poison every node,
        # and the midpoint rule is exact to within the span itself
        mid = a + (b - a) / 2.0
        return float((b - a) * np.asarray(g(np.asarray([mid])))[0])
    panels = 8
    previous = _simpson_fixed(g, a, b, panels)
    while panels < config.max_panels:
        panels *= 2
        current = _simpson_fixed(g, a, b, panels)
        if abs(current - previous) <= config.rel_tol * abs(current) + 1e-300:
            return current
        previous = current
    raise NumericError(
        f"quadrature did not converge on [{a}, {b}] within {config.max_panels} panels"
    )


def _split_points(a: float, b: float, near_zero: bool, near_one: bool) -> list[float]:
    points = [a]
    if near_zero and a < _SPLIT_REGION and a > 0.0:
        x = a
        while x * 4.0 < min(b, _SPLIT_REGION):
            x *= 4.0
            points.append(x)
    if near_one and (1.0 - b) < _SPLIT_REGION and b < 1.0:
        mirrored = []
        x = 1.0 - b
        while x * 4.0 < min(1.0 - a, _SPLIT_REGION):
            x *= 4.0
            mirrored.append(1.0 - x)
        points.extend(reversed(mirrored))
    points.append(b)
    return points


def integrate_segment(
    g, a: float, b: float, config: QuadConfig, near_zero: bool = False, near_one: bool = False
) -> float:
    """Integral of g over the closed segment [a, b] (0 < a <= b < 1 allowed
    to touch the ends only when g is evaluable there)."""
    if b <= a:
        return 0.0
    points = _split_points(a, b, near_zero, near_one)
    return math.fsum(
        simpson_refine(g, lo, hi, config) for lo, hi in zip(points[:-1], points[1:])
    )


def _octave_sweep(g, transform, start: float, config: QuadConfig, endpoint: float) -> float:
    """Sum octave integrals toward an open singular endpoint.

    ``transform`` maps a distance d in (0, start] to the pair of actual
    integration bounds for the octave [d/2, d].
    """
    pieces: list[float] = []
    total = 0.0
    quiet = 0
    d = start
    for _ in range(config.max_octaves):
        lo, hi = transform(d / 2.0, d)
        piece = simpson_refine(g, lo, hi, config)
        pieces.append(piece)
        total = math.fsum(pieces)
        if abs(piece) <= config.rel_tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
        d /= 2.0
    raise DivergentIntegralError(
        f"integral does not converge at t={endpoint:g}; "
        f"octave contributions near the endpoint do not decay "
        f"(last increment {pieces[-1]:.3g} after {config.max_octaves} octaves)",
        endpoint=endpoint,
    )


def tail_to_zero(g, b: float, config: QuadConfig) -> float:
    """Integral of g over (0, b] where t=0 is an open, possibly divergent end."""
    if b <= 0.0:
        return 0.0
    return _octave_sweep(g, lambda lo, hi: (lo, hi), b, config, endpoint=0.0)


def tail_to_one(g_complement, a: float, config: QuadConfig) -> float:
    """Integral of g over [a, 1) where t=1 is an open, possibly divergent end.

    Near 1 the grid of representable t values is too coarse for factors like
    1/(1-t), so the sweep runs in the distance u = 1-t; ``g_complement(u)``
    must evaluate g(1-u) with the u-dependence computed from u directly.
    """
    if a >= 1.0:
        return 0.0
    return _octave_sweep(g_complement, lambda lo, hi: (lo, hi), 1.0 - a, config, endpoint=1.0)


class _PieceTable:
    """Converged Simpson grid over one smooth piece, reusable for queries.

    ``edges`` are the 2-panel block boundaries (exact), ``prefix`` the
    cumulative block integrals; a query inside a block adds a small Simpson
    correction over the partial block.
    """

    __slots__ = ("edges", "prefix", "total")

    def __init__(self, edges: np.ndarray, prefix: np.ndarray):
        self.edges = edges
        self.prefix = prefix
        self.total = float(prefix[-1])


def _refine_table(g, a: float, b: float, config: QuadConfig) -> _PieceTable:
    panels = 8
    previous = _simpson_fixed(g, a, b, panels)
    while panels < config.max_panels:
        panels *= 2
        x = np.linspace(a, b, panels + 1)
        fx_x = x.copy()
        inset = (b - a) * 1e-13
        fx_x[0] = max(a + inset, np.nextafter(a, b))
        fx_x[-1] = min(b - inset, np.nextafter(b, a))
        fx = np.asarray(g(fx_x), dtype=np.float64)
        h = (b - a) / panels
        current = float(
            (fx[0] + fx[-1] + 4.0 * fx[1:-1:2].sum() + 2.0 * fx[2:-1:2].sum()) * h / 3.0
        )
        if abs(current - previous) <= config.rel_tol * abs(current) + 1e-300:
            blocks = (fx[:-2:2] + 4.0 * fx[1:-1:2] + fx[2::2]) * h / 3.0
            prefix = np.concatenate(([0.0], np.cumsum(blocks)))
            prefix[-1] = current  # keep the piece total exactly the converged sum
            return _PieceTable(edges=x[::2], prefix=prefix)
        previous = current
    raise NumericError(
        f"quadrature did not converge on [{a}, {b}] within {config.max_panels} panels"
    )


_PARTIAL_NODES = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
_PARTIAL_WEIGHTS = np.array([1.0, 4.0, 2.0, 4.0, 1.0]) / 12.0


def _partial_blocks(g, starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
    """Vectorized 4-panel Simpson over many short [start, stop] windows."""
    width = stops - starts
    nodes = starts[:, None] + width[:, None] * _PARTIAL_NODES[None, :]
    # evaluate jump-prone left edges from inside
    nodes[:, 0] = np.maximum(nodes[:, 0] + width * 1e-13, np.nextafter(starts, stops))
    nodes[:, -1] = stops - width * 1e-13
    values = np.asarray(g(nodes.ravel()), dtype=np.float64).reshape(nodes.shape)
    return width * (values @ _PARTIAL_WEIGHTS)


class CumulativeIntegral:
    """Vectorized x -> integral of g over [lo, min(x, hi)].

    ``near_zero``/``near_one`` mark integrands containing a 1/t or 1/(1-t)
    factor; when the corresponding domain end is 0 or 1 exactly, it is
    treated as open and swept by octaves.  Smooth pieces (between
    breakpoints, geometric splits applied near singular ends) are refined
    once and cached, so repeated batch queries cost one vectorized pass.
    """

    def __init__(
        self,
        g,
        breakpoints,
        lo: float,
        hi: float,
        config: QuadConfig,
        near_zero: bool = False,
        near_one: bool = False,
        g_complement=None,
    ):
        self._g = g
        self._lo = lo
        self._hi = hi
        self._config = config
        self._near_zero = near_zero
        self._near_one = near_one
        self._g_complement = g_complement if g_complement is not None else (
            lambda u: g(1.0 - np.asarray(u, dtype=np.float64))
        )

        breaks = [b for b in sorted(set(breakpoints)) if lo < b < hi]
        edges: list[float] = []
        spans = [lo, *breaks, hi]
        for a, b in zip(spans[:-1], spans[1:]):
            if a == 0.0 and near_zero:
                edges.extend([a, b])  # open tail piece, no geometric split
            else:
                top_open = b == 1.0 and near_one
                split_hi = _penultimate(a) if top_open else b
                pts = _split_points(a, split_hi, near_zero, near_one)
                edges.extend(pts)
                if top_open and split_hi < b:
                    edges.append(b)
        self._edges = np.unique(np.asarray(edges, dtype=np.float64))
        self._tables: dict[int, _PieceTable | None] = {}
        # cumulative piece integrals, extended lazily so a divergent open end
        # (e.g. W0 at t=1) only raises when a query actually reaches it
        self._piece_cum: list[float] = [0.0]

    # -- piece machinery -----------------------------------------------------
    def _is_open(self, k: int) -> tuple[float, float, bool]:
        a, b = float(self._edges[k]), float(self._edges[k + 1])
        open_piece = (a == 0.0 and self._near_zero) or (b == 1.0 and self._near_one)
        return a, b, open_piece

    def _get_table(self, k: int) -> _PieceTable | None:
        if k not in self._tables:
            a, b, open_piece = self._is_open(k)
            self._tables[k] = None if open_piece else _refine_table(self._g, a, b, self._config)
        return self._tables[k]

    def _full_value(self, k: int) -> float:
        table = self._get_table(k)
        if table is not None:
            return table.total
        a, b, _ = self._is_open(k)
        if a == 0.0 and self._near_zero:
            return tail_to_zero(self._g, b, self._config)
        return tail_to_one(self._g_complement, a, self._config)

    def _ensure_prefix(self, k_max: int) -> None:
        """Cumulative integral up to edges[k] for all k <= k_max."""
        while len(self._piece_cum) <= k_max:
            k = len(self._piece_cum) - 1
            self._piece_cum.append(self._piece_cum[-1] + self._full_value(k))

    # -- evaluation ------------------------------------------------------------
    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        xq = np.clip(xs, self._lo, self._hi)
        out = np.zeros_like(xq)
        active = xq > self._lo
        if active.any():
            targets_all = xq[active]
            piece = np.clip(
                np.searchsorted(self._edges, targets_all, side="right") - 1,
                0,
                self._edges.size - 2,
            )
            self._ensure_prefix(int(piece.max()))
            prefix = np.asarray(self._piece_cum)

            values = np.empty(piece.size)
            for k in np.unique(piece):
                mask = piece == k
                targets = targets_all[mask]
                table = self._get_table(int(k))
                base = prefix[k]
                if table is None:
                    values[mask] = base + self._open_piece_partial(int(k), targets)
                else:
                    j = np.clip(
                        np.searchsorted(table.edges, targets, side="right") - 1,
                        0,
                        table.edges.size - 2,
                    )
                    starts = table.edges[j]
                    partial = _partial_blocks(self._g, starts, targets)
                    full = targets >= self._edges[k + 1]
                    values[mask] = base + table.prefix[j] + np.where(
                        full, table.total - table.prefix[j], partial
                    )
            out[active] = values
        if np.isscalar(x) or np.asarray(x).ndim == 0:
            return float(out[0])
        return out

    def _open_piece_partial(self, k: int, targets: np.ndarray) -> np.ndarray:
        a, b, _ = self._is_open(k)
        result = np.empty(targets.size)
        for i, xq in enumerate(targets):
            xq = float(xq)
            if xq >= b:
                result[i] = self._full_value(k)
            elif a == 0.0 and self._near_zero:
                result[i] = tail_to_zero(self._g, xq, self._config)
            else:  # open top piece: interior queries never touch t=1
                result[i] = integrate_segment(
                    self._g, a, xq, self._config, self._near_zero, self._near_one
                )
        return result


def _penultimate(a: float) -> float:
    # hand the open upper end a bounded launch point for the octave sweep
    return max(a, 1.0 - _SPLIT_REGION)
