"""NumPy implementations of the hot numeric kernels.

Mirror of the compiled extension in ``_ckernels.pyx``; selected at import
time when the extension is unavailable or ``NETBENEFIT_PURE_PYTHON`` is set.
All functions expect contiguous float64 inputs (int64 for index arrays).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def suffix_levels(scores_sorted, case_mass_sorted, control_mass_sorted):
    """Collapse presorted scores into unique jump points with suffix masses.

    Returns ``(jumps, tp_mass, fp_mass)`` where ``tp_mass[j]`` is the total
    case mass strictly above ``jumps[j - 1]`` (``tp_mass[0]`` is the full
    mass), so the arrays have one more entry than ``jumps``.
    """
    scores_sorted = np.ascontiguousarray(scores_sorted, dtype=np.float64)
    n = scores_sorted.shape[0]
    if n == 0:
        z = np.zeros(1)
        return np.empty(0), z, z.copy()
    is_first = np.empty(n, dtype=bool)
    is_first[0] = True
    np.not_equal(scores_sorted[1:], scores_sorted[:-1], out=is_first[1:])
    starts = np.flatnonzero(is_first)
    jumps = scores_sorted[starts]

    case_tail = np.concatenate(([0.0], np.cumsum(case_mass_sorted[::-1])))[::-1]
    ctrl_tail = np.concatenate(([0.0], np.cumsum(control_mass_sorted[::-1])))[::-1]
    # mass strictly above jumps[j] = tail mass from the group after jumps[j]
    bounds = np.concatenate((starts, [n]))
    tp = case_tail[bounds]
    fp = ctrl_tail[bounds]
    return jumps, tp, fp


def weighted_score_sum(weights, outcomes, w1_at_scores, w0_at_scores):
    """Per-capita weighted sum ``(1/W) * sum w*(y*W1(f) - (1-y)*W0(f))``."""
    w = np.asarray(weights, dtype=np.float64)
    y = np.asarray(outcomes, dtype=np.float64)
    contrib = y * np.asarray(w1_at_scores) - (1.0 - y) * np.asarray(w0_at_scores)
    return float(np.dot(w, contrib) / np.sum(w))


def resample_ratio(contributions, weights, indices):
    """Weighted-mean statistic for each resample row of ``indices``.

    ``indices`` has shape ``(B, n)``; row ``b`` holds the subject indices of
    replicate ``b``.  Returns an array of B values
    ``sum(w[i]*c[i]) / sum(w[i])`` over each row.
    """
    w = np.asarray(weights, dtype=np.float64)
    wc = w * np.asarray(contributions, dtype=np.float64)
    idx = np.asarray(indices)
    return wc[idx].sum(axis=1) / w[idx].sum(axis=1)


def brute_utility_sum(scores, thresholds, outcomes, weights, a, b, c, d):
    """Total weighted utility when subject i is flagged iff score > threshold_i.

    Flagged cases earn ``a``, flagged non-cases ``b``, unflagged cases ``c``,
    unflagged non-cases ``d`` (all per-subject arrays).  Returns the weighted
    sum; the caller divides by total weight.
    """
    flag = np.asarray(scores) > np.asarray(thresholds)
    y = np.asarray(outcomes, dtype=bool)
    payoff = np.where(flag, np.where(y, a, b), np.where(y, c, d))
    return float(np.dot(np.asarray(weights, dtype=np.float64), payoff))
