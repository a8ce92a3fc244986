import csv
import json

import numpy as np
import pytest

from netbenefit.cli import main

DEMO_CSV = "risk,y\n0.9,1\n0.2,0\n0.8,1\n0.1,0\n"
TWO_MODEL_CSV = "m1,m2,y\n0.8,0.6,1\n0.3,0.4,0\n"


@pytest.fixture
def demo_csv(tmp_path):
    path = tmp_path / "demo.csv"
    path.write_text(DEMO_CSV)
    return str(path)


@pytest.fixture
def two_model_csv(tmp_path):
    path = tmp_path / "two.csv"
    path.write_text(TWO_MODEL_CSV)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SCHEMA = "outcome=y,scores=risk"


class TestCurve:
    def test_default_grid_has_99_rows(self, capsys, demo_csv):
        code, out, _ = run(capsys, "curve", "--input", demo_csv, "--schema", SCHEMA)
        rows = list(csv.DictReader(out.splitlines()))
        assert code == 0
        assert len(rows) == 99
        assert all(float(r["treat_none"]) == 0.0 for r in rows)

    def test_single_threshold(self, capsys, demo_csv):
        code, out, _ = run(
            capsys, "curve", "--input", demo_csv, "--schema", SCHEMA, "--grid", "0.15"
        )
        rows = list(csv.DictReader(out.splitlines()))
        assert code == 0 and len(rows) == 1
        assert float(rows[0]["risk"]) == pytest.approx(0.455882, abs=1e-6)

    def test_missing_column_exits_2(self, capsys, demo_csv):
        code, _, err = run(
            capsys, "curve", "--input", demo_csv, "--schema", "outcome=nope,scores=risk"
        )
        assert code == 2
        assert "missing column" in err

    def test_json_format_echoes_config(self, capsys, demo_csv):
        code, out, _ = run(
            capsys, "curve", "--input", demo_csv, "--schema", SCHEMA, "--format", "json",
            "--grid", "0.1,0.2",
        )
        data = json.loads(out)
        assert code == 0
        assert data["command"] == "curve"
        assert data["config"]["schema"] == SCHEMA
        assert len(data["result"]) == 2

    def test_range_grid(self, capsys, demo_csv):
        code, out, _ = run(
            capsys, "curve", "--input", demo_csv, "--schema", SCHEMA, "--grid", "0.1:0.3:0.1"
        )
        rows = list(csv.DictReader(out.splitlines()))
        assert [float(r["threshold"]) for r in rows] == [0.1, 0.2, 0.3]

    def test_output_file(self, capsys, demo_csv, tmp_path):
        target = tmp_path / "out.csv"
        code, out, _ = run(
            capsys, "curve", "--input", demo_csv, "--schema", SCHEMA, "--output", str(target)
        )
        assert code == 0 and out == ""
        assert target.read_text().startswith("threshold,")


class TestCnb:
    def test_parabola_text_output(self, capsys, demo_csv):
        code, out, _ = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", '{"variant":"parabola","scale":1.0}',
        )
        assert code == 0
        assert "23.7500" in out  # 0.2375 per capita reported per 100 people

    def test_json_value_is_per_capita(self, capsys, demo_csv):
        code, out, _ = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", '{"variant":"parabola","scale":1.0}', "--format", "json",
        )
        data = json.loads(out)
        assert data["result"]["risk"]["value"] == pytest.approx(0.2375, abs=1e-12)

    def test_point_mass_preset_below_all_scores(self, capsys, tmp_path):
        path = tmp_path / "low.csv"
        path.write_text("risk,y\n0.05,1\n0.02,0\n")
        code, out, _ = run(
            capsys, "cnb", "--input", str(path), "--schema", SCHEMA,
            "--weights", "preset:statins", "--format", "json",
        )
        data = json.loads(out)
        assert code == 0
        assert data["result"]["risk"]["value"] == 0.0

    def test_divergent_spec_exits_3_with_guidance(self, capsys, demo_csv):
        code, _, err = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", '{"variant":"uniform"}',
        )
        assert code == 3
        assert "compare" in err

    def test_bootstrap_deterministic(self, capsys, demo_csv):
        args = (
            "cnb", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", '{"variant":"parabola","scale":1.0}',
            "--bootstrap", "200", "--seed", "7", "--format", "json",
        )
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2
        assert json.loads(out1)["result"]["risk"]["ci"] is not None

    def test_normalize_wrapper_key(self, capsys, demo_csv):
        code, out, _ = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", '{"variant":"point_mass","t_star":0.5,"normalize":true}',
            "--format", "json",
        )
        data = json.loads(out)
        assert data["result"]["risk"]["value"] == pytest.approx(0.5)
        assert data["result"]["risk"]["unit"] == "combined-true-positives"

    def test_weights_file(self, capsys, demo_csv, tmp_path):
        spec_path = tmp_path / "w.json"
        spec_path.write_text('{"variant":"parabola","scale":1.0}')
        code, out, _ = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", str(spec_path), "--format", "json",
        )
        assert json.loads(out)["result"]["risk"]["value"] == pytest.approx(0.2375)

    def test_unknown_preset_exits_2(self, capsys, demo_csv):
        code, _, err = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA, "--weights", "preset:nope"
        )
        assert code == 2 and "unknown preset" in err


class TestCompare:
    def test_identical_models_zero_difference(self, capsys, tmp_path):
        path = tmp_path / "same.csv"
        path.write_text("m1,m2,y\n0.9,0.9,1\n0.2,0.2,0\n")
        code, out, _ = run(
            capsys, "compare", "--input", str(path), "--schema", "outcome=y,scores=m1:m2",
            "--weights", '{"variant":"uniform"}', "--format", "json",
            "--bootstrap", "50", "--seed", "1",
        )
        data = json.loads(out)
        assert data["result"]["difference"] == 0.0
        assert data["result"]["ci"]["lower"] == 0.0 == data["result"]["ci"]["upper"]

    def test_uniform_notes_likelihood(self, capsys, two_model_csv):
        code, out, _ = run(
            capsys, "compare", "--input", two_model_csv, "--schema", "outcome=y,scores=m1:m2",
            "--weights", '{"variant":"uniform"}',
        )
        assert code == 0
        assert "log-likelihood" in out
        assert "0.220916" in out

    def test_single_model_exits_2(self, capsys, demo_csv):
        code, _, err = run(
            capsys, "compare", "--input", demo_csv, "--schema", SCHEMA,
            "--weights", '{"variant":"uniform"}',
        )
        assert code == 2 and "two models" in err


class TestOracle:
    def test_exhaustive_passes(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "6", "--seed", "4")
        data = json.loads(out)
        assert code == 0
        assert data["result"]["identity_check"]["passed"]
        assert data["result"]["identity_check"]["error"] < 1e-9

    def test_exhaustive_large_n_exits_2(self, capsys):
        code, _, err = run(capsys, "oracle", "--n", "9")
        assert code == 2 and "n <= 8" in err

    def test_monte_carlo_mode(self, capsys):
        code, out, _ = run(
            capsys, "oracle", "--n", "500", "--mode", "monte-carlo",
            "--permutations", "50", "--seed", "2",
        )
        data = json.loads(out)
        assert code == 0
        assert data["result"]["identity_check"]["mode"] == "monte-carlo"
        assert data["result"]["identity_check"]["passed"]

    def test_witness_flag(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "4", "--witness", "--seed", "0")
        data = json.loads(out)
        assert code == 0
        assert data["result"]["witness_found"]
        assert data["result"]["witness"]["aunb_margin"] > 1e-6

    def test_two_group_flag(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "4", "--two-group", "--seed", "0")
        data = json.loads(out)
        ratios = data["result"]["two_group"]["importance_by_threshold"]
        assert ratios["0.11"] / ratios["0.1"] == pytest.approx(1e4, rel=1e-6)


class TestDemo:
    def test_demo_json_sections(self, capsys):
        code, out, _ = run(capsys, "demo", "--n", "400", "--seed", "3")
        data = json.loads(out)
        assert code == 0
        result = data["result"]
        assert set(result["multi_intervention"]) == {"statins", "lifestyle"}
        assert set(result["threshold_distribution"]) == {"fixed_10pct", "log_normal"}
        # components stay separate without an explicit ratio
        assert "combined" not in result

    def test_demo_combined_with_ratio(self, capsys):
        code, out, _ = run(
            capsys, "demo", "--n", "400", "--seed", "3", "--combine-ratio", "0.5"
        )
        data = json.loads(out)
        result = data["result"]
        assert result["combined"]["effect_ratio"] == 0.5
        statins = result["multi_intervention"]["statins"]["policies"]["full"]["estimate"]
        lifestyle = result["multi_intervention"]["lifestyle"]["policies"]["full"]["estimate"]
        assert result["combined"]["policies"]["full"]["estimate"] == pytest.approx(
            statins + 0.5 * lifestyle
        )

    def test_demo_text_format(self, capsys):
        code, out, _ = run(capsys, "demo", "--n", "400", "--seed", "3", "--format", "text")
        assert code == 0
        assert "prevalence" in out and "lifestyle" in out

    def test_demo_deterministic(self, capsys):
        _, out1, _ = run(capsys, "demo", "--n", "300", "--seed", "5")
        _, out2, _ = run(capsys, "demo", "--n", "300", "--seed", "5")
        assert out1 == out2


class TestExitCodes:
    def test_unreadable_input_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "curve", "--input", str(tmp_path / "missing.csv"), "--schema", SCHEMA
        )
        assert code == 2

    def test_bad_weight_json_exits_2(self, capsys, demo_csv):
        code, _, err = run(
            capsys, "cnb", "--input", demo_csv, "--schema", SCHEMA, "--weights", '{"variant":'
        )
        assert code == 2 and "JSON" in err

    def test_unknown_subcommand_exits_2(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 2

    def test_missing_input_flag_exits_2(self, capsys):
        code, _, err = run(capsys, "curve", "--schema", SCHEMA)
        assert code == 2 and "--input" in err
