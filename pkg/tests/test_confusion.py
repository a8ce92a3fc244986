import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netbenefit.confusion import confusion_at, sweep
from netbenefit.dataset import EvaluationDataset
from netbenefit.errors import ValidationError


def make_ds(scores, outcomes, weights=None):
    scores = np.asarray(scores, dtype=float)
    return EvaluationDataset(
        scores={"m": scores},
        outcomes=np.asarray(outcomes, dtype=float),
        weights=np.ones(len(scores)) if weights is None else np.asarray(weights, dtype=float),
    )


class TestSweepExamples:
    def test_mid_threshold(self, demo4):
        curve = sweep(demo4, "m")
        assert confusion_at(curve, 0.5) == (0.5, 0.0, 0.0, 0.5)

    def test_threshold_above_all(self, demo4):
        curve = sweep(demo4, "m")
        assert confusion_at(curve, 0.95) == (0.0, 0.0, 0.5, 0.5)

    def test_threshold_below_all(self, demo4):
        curve = sweep(demo4, "m")
        assert confusion_at(curve, 0.05) == (0.5, 0.5, 0.0, 0.0)

    def test_unknown_model(self, demo4):
        with pytest.raises(ValidationError, match="unknown model"):
            sweep(demo4, "nope")


class TestStrictInequality:
    def test_tie_not_flagged(self):
        # a threshold exactly on a score leaves that subject unflagged
        ds = make_ds([0.3, 0.3, 0.7], [1, 0, 1])
        curve = sweep(ds, "m")
        tp, fp, fn, tn = confusion_at(curve, 0.3)
        assert (tp, fp) == (pytest.approx(1 / 3), 0.0)

    def test_constant_between_jumps(self, demo4):
        curve = sweep(demo4, "m")
        assert confusion_at(curve, 0.21) == confusion_at(curve, 0.79)
        assert confusion_at(curve, 0.200001) == confusion_at(curve, 0.21)

    def test_duplicate_scores_collapse(self):
        ds = make_ds([0.5, 0.5, 0.5], [1, 0, 1])
        curve = sweep(ds, "m")
        assert curve.jump_points.tolist() == [0.5]
        assert confusion_at(curve, 0.4)[0] == pytest.approx(2 / 3)
        assert confusion_at(curve, 0.5)[0] == 0.0


class TestInvariants:
    def test_partition_sums_to_one(self, demo4):
        curve = sweep(demo4, "m")
        for t in (0.3, 0.05, 0.5, 0.9, 0.1):
            assert sum(confusion_at(curve, t)) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_monotone_and_bounded(self, data):
        n = data.draw(st.integers(2, 25))
        scores = data.draw(
            st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=n, max_size=n)
        )
        outcomes = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
        weights = data.draw(
            st.lists(st.floats(0.1, 5.0, allow_nan=False), min_size=n, max_size=n)
        )
        ds = make_ds(scores, outcomes, weights)
        curve = sweep(ds, "m")
        grid = np.linspace(0.01, 0.99, 23)
        tp = curve.tp(grid)
        fp = curve.fp(grid)
        assert np.all(np.diff(tp) <= 1e-15) and np.all(np.diff(fp) <= 1e-15)
        assert np.all(tp >= -1e-15) and np.all(tp <= curve.prevalence + 1e-12)
        assert np.all(fp >= -1e-15) and np.all(fp <= 1 - curve.prevalence + 1e-12)
        for t in (0.25, 0.75):
            assert sum(confusion_at(curve, t)) == pytest.approx(1.0, abs=1e-12)

    def test_extreme_levels(self, demo4):
        curve = sweep(demo4, "m")
        assert curve.tp_levels[0] == curve.prevalence
        assert curve.fp_levels[0] == 1 - curve.prevalence
        assert curve.tp_levels[-1] == 0.0 and curve.fp_levels[-1] == 0.0

    def test_weight_rescaling_power_of_two_is_exact(self, demo4):
        curve = sweep(demo4, "m")
        scaled = sweep(
            EvaluationDataset(
                scores=dict(demo4.scores), outcomes=demo4.outcomes, weights=demo4.weights * 8.0
            ),
            "m",
        )
        assert np.array_equal(curve.tp_levels, scaled.tp_levels)
        assert np.array_equal(curve.fp_levels, scaled.fp_levels)

    def test_weight_rescaling_general(self):
        rng = np.random.default_rng(5)
        scores = rng.random(30)
        y = (rng.random(30) < 0.4).astype(float)
        w = rng.uniform(0.2, 4.0, 30)
        a = sweep(make_ds(scores, y, w), "m")
        b = sweep(make_ds(scores, y, w * 1.7), "m")
        assert a.tp_levels == pytest.approx(b.tp_levels, abs=1e-12)
        assert a.fp_levels == pytest.approx(b.fp_levels, abs=1e-12)


class TestThresholdDomain:
    @pytest.mark.parametrize("t", [0.0, 1.0, -0.2, 1.5])
    def test_rejects_out_of_domain(self, demo4, t):
        curve = sweep(demo4, "m")
        with pytest.raises(ValidationError):
            confusion_at(curve, t)
