"""Both kernel backends must implement the same contract; the compiled one
is an optimization, never a behavior change."""

import numpy as np
import pytest

from netbenefit._kernels import _pykernels

try:
    from netbenefit._kernels import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])
IDS = ["python"] + (["compiled"] if _ckernels is not None else [])


@pytest.fixture(params=BACKENDS, ids=IDS)
def kernel(request):
    return request.param


def example_arrays(seed=0, n=200):
    rng = np.random.default_rng(seed)
    scores = rng.choice(np.round(rng.random(40), 3), n)  # with ties
    y = (rng.random(n) < 0.4).astype(float)
    w = rng.uniform(0.2, 3.0, n)
    return scores, y, w


class TestSuffixLevels:
    def test_small_example(self, kernel):
        scores = np.array([0.1, 0.2, 0.8, 0.9])
        case = np.array([0.0, 0.0, 0.25, 0.25])
        ctrl = np.array([0.25, 0.25, 0.0, 0.0])
        jumps, tp, fp = kernel.suffix_levels(scores, case, ctrl)
        assert jumps.tolist() == [0.1, 0.2, 0.8, 0.9]
        assert tp.tolist() == [0.5, 0.5, 0.5, 0.25, 0.0]
        assert fp.tolist() == [0.5, 0.25, 0.0, 0.0, 0.0]

    def test_ties_collapse(self, kernel):
        scores = np.array([0.5, 0.5, 0.5])
        jumps, tp, fp = kernel.suffix_levels(scores, np.array([0.1, 0.2, 0.0]), np.zeros(3))
        assert jumps.tolist() == [0.5]
        assert tp == pytest.approx([0.3, 0.0], abs=1e-15)

    def test_empty(self, kernel):
        jumps, tp, fp = kernel.suffix_levels(np.empty(0), np.empty(0), np.empty(0))
        assert jumps.size == 0 and tp.tolist() == [0.0]

    def test_backends_agree(self):
        if _ckernels is None:
            pytest.skip("compiled backend unavailable")
        scores, y, w = example_arrays()
        order = np.argsort(scores, kind="stable")
        args = (scores[order], (w * y)[order], (w * (1 - y))[order])
        j1, tp1, fp1 = _pykernels.suffix_levels(*args)
        j2, tp2, fp2 = _ckernels.suffix_levels(*args)
        assert np.array_equal(j1, j2)
        assert tp1 == pytest.approx(tp2, rel=1e-13)
        assert fp1 == pytest.approx(fp2, rel=1e-13)


class TestWeightedScoreSum:
    def test_hand_value(self, kernel):
        got = kernel.weighted_score_sum(
            np.ones(4),
            np.array([1.0, 0.0, 1.0, 0.0]),
            np.array([0.495, 0.0, 0.48, 0.0]),
            np.array([0.0, 0.02, 0.0, 0.005]),
        )
        assert got == pytest.approx(0.2375, abs=1e-15)

    def test_backends_agree(self):
        if _ckernels is None:
            pytest.skip("compiled backend unavailable")
        scores, y, w = example_arrays(1)
        w1f = scores * 1.3
        w0f = scores**2
        a = _pykernels.weighted_score_sum(w, y, w1f, w0f)
        b = _ckernels.weighted_score_sum(w, y, w1f, w0f)
        assert a == pytest.approx(b, rel=1e-13)

    def test_accepts_readonly_views(self, kernel):
        w = np.ones(3)
        w.flags.writeable = False
        assert kernel.weighted_score_sum(w, np.ones(3), np.ones(3), np.ones(3)) == 1.0


class TestResampleRatio:
    def test_identity_indices(self, kernel):
        contrib = np.array([1.0, 2.0, 3.0])
        w = np.array([1.0, 1.0, 2.0])
        idx = np.arange(3, dtype=np.int64)[None, :]
        got = kernel.resample_ratio(contrib, w, idx)
        assert got[0] == pytest.approx(9.0 / 4.0, rel=1e-15)

    def test_repeated_subject(self, kernel):
        contrib = np.array([1.0, 5.0])
        w = np.array([2.0, 1.0])
        idx = np.array([[1, 1]], dtype=np.int64)
        assert kernel.resample_ratio(contrib, w, idx)[0] == 5.0

    def test_backends_agree(self):
        if _ckernels is None:
            pytest.skip("compiled backend unavailable")
        scores, y, w = example_arrays(2)
        idx = np.random.default_rng(0).integers(0, scores.size, (50, scores.size))
        a = _pykernels.resample_ratio(scores, w, idx)
        b = _ckernels.resample_ratio(scores, w, idx)
        assert a == pytest.approx(b, rel=1e-13)


class TestBruteUtilitySum:
    def test_strict_flagging(self, kernel):
        got = kernel.brute_utility_sum(
            np.array([0.5, 0.6]),
            np.array([0.5, 0.5]),
            np.array([1.0, 1.0]),
            np.ones(2),
            np.array([1.0, 1.0]),
            np.array([-1.0, -1.0]),
            np.zeros(2),
            np.zeros(2),
        )
        assert got == 1.0  # only the 0.6 subject is flagged

    def test_backends_agree(self):
        if _ckernels is None:
            pytest.skip("compiled backend unavailable")
        rng = np.random.default_rng(3)
        n = 500
        args = (
            rng.random(n),
            rng.random(n),
            (rng.random(n) < 0.5).astype(float),
            rng.uniform(0.1, 2.0, n),
            rng.normal(5, 1, n),
            rng.normal(-5, 1, n),
            rng.normal(0, 1, n),
            rng.normal(0, 1, n),
        )
        assert _pykernels.brute_utility_sum(*args) == pytest.approx(
            _ckernels.brute_utility_sum(*args), rel=1e-13
        )


def test_compiled_backend_is_active_when_built():
    from netbenefit import _kernels

    if _ckernels is not None and not __import__("os").environ.get("NETBENEFIT_PURE_PYTHON"):
        assert _kernels.backend() == "compiled"
    else:
        assert _kernels.backend() == "python"


def test_pure_python_env_override():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from netbenefit import _kernels; print(_kernels.backend())"],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "NETBENEFIT_PURE_PYTHON": "1"},
    )
    assert out.stdout.strip() == "python"
