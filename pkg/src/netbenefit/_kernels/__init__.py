"""Hot numeric kernels with a compiled core and a NumPy fallback.

The compiled extension (``_ckernels``, built from Cython) is used when it
imports cleanly; otherwise the NumPy implementations in ``_pykernels`` take
over.  Set ``NETBENEFIT_PURE_PYTHON=1`` to force the fallback.  Both
backends expose the same functions and agree to within accumulation
round-off; ``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

if os.environ.get("NETBENEFIT_PURE_PYTHON"):
    from netbenefit._kernels import _pykernels as _impl
else:
    try:
        from netbenefit._kernels import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from netbenefit._kernels import _pykernels as _impl

BACKEND = _impl.BACKEND
suffix_levels = _impl.suffix_levels
weighted_score_sum = _impl.weighted_score_sum
resample_ratio = _impl.resample_ratio
brute_utility_sum = _impl.brute_utility_sum


def backend() -> str:
    """Name of the active kernel backend: ``"compiled"`` or ``"python"``."""
    return BACKEND
