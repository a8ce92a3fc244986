import numpy as np
import pytest

from netbenefit.dataset import ColumnSchema, EvaluationDataset, load_csv, save_csv, summarize
from netbenefit.errors import ValidationError


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


SCHEMA = ColumnSchema(outcome="y", scores={"m": "m"})
SCHEMA_W = ColumnSchema(outcome="y", scores={"m": "m"}, weight="w")


class TestLoadCsv:
    def test_four_row_demo(self, tmp_path):
        path = write(tmp_path, "m,y\n0.9,1\n0.2,0\n0.8,1\n0.1,0\n")
        ds = load_csv(path, SCHEMA)
        assert ds.n == 4
        assert summarize(ds).prevalence == 0.5
        # row order preserved
        assert ds.scores["m"].tolist() == [0.9, 0.2, 0.8, 0.1]

    def test_score_out_of_range_names_row(self, tmp_path):
        path = write(tmp_path, "m,y\n0.9,1\n1.2,0\n")
        with pytest.raises(ValidationError, match="row 3.*'m'.*outside"):
            load_csv(path, SCHEMA)

    def test_weight_column_total(self, tmp_path):
        path = write(tmp_path, "m,y,w\n0.9,1,2\n0.2,0,1\n0.8,1,1\n0.1,0,0\n")
        ds = load_csv(path, SCHEMA_W)
        assert ds.total_weight == 4.0

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "m,outcome\n0.9,1\n")
        with pytest.raises(ValidationError, match="missing column 'y'"):
            load_csv(path, SCHEMA)

    def test_non_numeric_cell_location(self, tmp_path):
        path = write(tmp_path, "m,y\n0.9,1\nabc,0\n")
        with pytest.raises(ValidationError, match="row 3.*'m'.*not numeric"):
            load_csv(path, SCHEMA)

    def test_negative_weight(self, tmp_path):
        path = write(tmp_path, "m,y,w\n0.9,1,-1\n")
        with pytest.raises(ValidationError, match="row 2.*'w'.*negative"):
            load_csv(path, SCHEMA_W)

    def test_empty_file(self, tmp_path):
        path = write(tmp_path, "")
        with pytest.raises(ValidationError, match="empty"):
            load_csv(path, SCHEMA)

    def test_header_only(self, tmp_path):
        path = write(tmp_path, "m,y\n")
        with pytest.raises(ValidationError, match="no data rows"):
            load_csv(path, SCHEMA)

    def test_outcome_not_binary(self, tmp_path):
        path = write(tmp_path, "m,y\n0.9,2\n")
        with pytest.raises(ValidationError, match="row 2.*not 0 or 1"):
            load_csv(path, SCHEMA)

    def test_missing_weight_defaults_to_one(self, tmp_path):
        path = write(tmp_path, "m,y\n0.9,1\n0.2,0\n")
        ds = load_csv(path, SCHEMA)
        assert ds.weights.tolist() == [1.0, 1.0]

    def test_boundary_scores_accepted(self, tmp_path):
        path = write(tmp_path, "m,y\n0.0,0\n1.0,1\n")
        ds = load_csv(path, SCHEMA)
        assert ds.scores["m"].tolist() == [0.0, 1.0]


class TestRoundTrip:
    def test_save_load_bit_identical(self, tmp_path):
        rng = np.random.default_rng(3)
        ds = EvaluationDataset(
            scores={"m": rng.random(40), "other": rng.random(40)},
            outcomes=(rng.random(40) < 0.4).astype(float),
            weights=rng.uniform(0, 3, 40),
        )
        path = tmp_path / "out.csv"
        save_csv(ds, path)
        schema = ColumnSchema(outcome="outcome", scores={m: m for m in ds.models}, weight="weight")
        again = load_csv(path, schema)
        for m in ds.models:
            assert np.array_equal(again.scores[m], ds.scores[m])
        assert np.array_equal(again.outcomes, ds.outcomes)
        assert np.array_equal(again.weights, ds.weights)


class TestSummarize:
    def test_all_positive(self):
        ds = EvaluationDataset(
            scores={"m": np.array([0.2, 0.4])}, outcomes=np.ones(2), weights=np.ones(2)
        )
        assert summarize(ds).prevalence == 1.0

    def test_unit_weights(self, demo4):
        assert summarize(demo4).prevalence == 0.5

    def test_weighted_mean(self):
        ds = EvaluationDataset(
            scores={"m": np.array([0.5, 0.5])},
            outcomes=np.array([1.0, 0.0]),
            weights=np.array([3.0, 1.0]),
        )
        assert summarize(ds).prevalence == 0.75

    def test_prevalence_invariant_under_weight_rescaling(self, demo4):
        for c in (2.0, 0.125, 3.7):
            scaled = EvaluationDataset(
                scores=dict(demo4.scores), outcomes=demo4.outcomes, weights=demo4.weights * c
            )
            assert summarize(scaled).prevalence == pytest.approx(0.5, abs=1e-14)


class TestValidation:
    def test_weights_must_be_finite(self):
        with pytest.raises(ValidationError, match="not finite"):
            EvaluationDataset(
                scores={"m": np.array([0.5])}, outcomes=np.array([1.0]), weights=np.array([np.inf])
            )

    def test_total_weight_positive(self):
        with pytest.raises(ValidationError, match="total weight"):
            EvaluationDataset(
                scores={"m": np.array([0.5])}, outcomes=np.array([1.0]), weights=np.zeros(1)
            )

    def test_score_length_mismatch(self):
        with pytest.raises(ValidationError, match="subject count"):
            EvaluationDataset(
                scores={"m": np.array([0.5])}, outcomes=np.array([1.0, 0.0]), weights=np.ones(2)
            )

    def test_immutable_arrays(self, demo4):
        with pytest.raises(ValueError):
            demo4.outcomes[0] = 0.0
        with pytest.raises(ValueError):
            demo4.scores["m"][0] = 0.5

    def test_unknown_model(self, demo4):
        with pytest.raises(ValidationError, match="unknown model"):
            demo4.model_scores("nope")

    def test_take_keeps_row_ids(self, demo4):
        sub = demo4.take(np.array([3, 3, 0]))
        assert sub.row_ids.tolist() == [3, 3, 0]
        assert sub.scores["m"].tolist() == [0.1, 0.1, 0.9]


class TestSchemaParsing:
    def test_full_schema_string(self):
        schema = ColumnSchema.from_string("outcome=y,scores=a:b,weight=w")
        assert schema.outcome == "y"
        assert schema.scores == {"a": "a", "b": "b"}
        assert schema.weight == "w"

    def test_requires_outcome(self):
        with pytest.raises(ValidationError, match="outcome"):
            ColumnSchema.from_string("scores=a")

    def test_requires_scores(self):
        with pytest.raises(ValidationError, match="score"):
            ColumnSchema.from_string("outcome=y")

    def test_rejects_unknown_key(self):
        with pytest.raises(ValidationError, match="unknown schema key"):
            ColumnSchema.from_string("outcome=y,scores=a,extra=1")
