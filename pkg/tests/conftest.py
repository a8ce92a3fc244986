import numpy as np
import pytest

from netbenefit.dataset import EvaluationDataset


@pytest.fixture
def demo4() -> EvaluationDataset:
    """Four subjects, scores {0.9, 0.2, 0.8, 0.1}, outcomes {1, 0, 1, 0}."""
    return EvaluationDataset(
        scores={"m": np.array([0.9, 0.2, 0.8, 0.1])},
        outcomes=np.array([1.0, 0.0, 1.0, 0.0]),
        weights=np.ones(4),
    )


def random_dataset(seed: int, n: int = 50, models=("m1", "m2"), low=0.01, high=0.99):
    """Random interior-score dataset used by identity checks."""
    rng = np.random.default_rng(seed)
    scores = {m: rng.uniform(low, high, n) for m in models}
    outcomes = (rng.random(n) < scores[models[0]]).astype(np.float64)
    weights = rng.uniform(0.5, 2.0, n)
    return EvaluationDataset(scores=scores, outcomes=outcomes, weights=weights)
