"""Command-line interface.

Exit codes: 0 success, 2 input/validation failure, 3 numerical failure
(divergent weighting, non-convergence), 4 internal error.  Errors go to
stderr; JSON output echoes the configuration for provenance.
"""

from __future__ import annotations

import csv as csv_module
import io
import json
import sys

import click
import numpy as np

from netbenefit import __version__
from netbenefit.binary import decision_curve, default_grid
from netbenefit.bootstrap import (
    BootstrapConfig,
    bootstrap_ci,
    cnb_difference_statistic,
    cnb_statistic,
)
from netbenefit.continuous import cnb_difference, continuous_net_benefit, treat_all_cnb
from netbenefit.dataset import ColumnSchema, load_csv, summarize
from netbenefit.errors import NetBenefitError, NumericError, ValidationError
from netbenefit.oracle import (
    GeneratorConfig,
    UniformThresholds,
    aunb_disagreement_witness,
    generate_population,
    group_delta_shares,
    group_importance,
    two_group_scenario,
    verify_expected_nb,
)
from netbenefit.quadrature import QuadConfig
from netbenefit.weighting import UniformWeight, WeightSpec, example_weights, normalize, spec_from_dict


def _parse_grid(text: str | None) -> np.ndarray:
    if text is None:
        return default_grid()
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValidationError("grid step must be positive")
        count = int(round((stop - start) / step))
        return np.round(start + step * np.arange(count + 1), 12)
    try:
        return np.asarray([float(p) for p in text.split(",") if p.strip()], dtype=np.float64)
    except ValueError:
        raise ValidationError(f"could not parse grid {text!r}") from None


def _parse_weights(text: str, epsilon: float | None) -> WeightSpec:
    """Weight spec from inline JSON, a JSON file path, or ``preset:NAME``."""
    if text.startswith("preset:"):
        name = text.split(":", 1)[1]
        presets = example_weights(epsilon=epsilon if epsilon is not None else 1e-6)
        if name not in presets:
            raise ValidationError(f"unknown preset {name!r}; available: {sorted(presets)}")
        return presets[name]
    if text.lstrip().startswith("{"):
        raw = text
    else:
        try:
            with open(text, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read weight spec file {text!r}: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"weight spec is not valid JSON: {exc}") from None
    wants_normalize = bool(data.pop("normalize", False)) if isinstance(data, dict) else False
    spec = spec_from_dict(data)
    if wants_normalize:
        spec = normalize(spec, _quad_config(epsilon))
    return spec


def _quad_config(epsilon: float | None) -> QuadConfig:
    return QuadConfig(lower_cutoff=epsilon, upper_cutoff=None if epsilon is None else 1 - epsilon)


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        click.echo(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _json_report(command: str, config: dict, result) -> str:
    return json.dumps(
        {"command": command, "version": __version__, "config": config, "result": result},
        indent=2,
        sort_keys=True,
    )


def _load(input_path: str, schema_text: str):
    if input_path is None:
        raise ValidationError("--input is required")
    if schema_text is None:
        raise ValidationError("--schema is required (outcome=COL,scores=COL1:COL2[,weight=COL])")
    return load_csv(input_path, ColumnSchema.from_string(schema_text))


@click.group()
@click.version_option(__version__)
def cli():
    """Decision curves, binary and continuous net benefit, bootstrap inference."""


_input_opt = click.option("--input", "input_path", type=click.Path(), help="CSV file to evaluate")
_schema_opt = click.option(
    "--schema", "schema_text", help="outcome=COL,scores=COL1:COL2[,weight=COL]"
)
_output_opt = click.option("--output", default=None, help="output path (default stdout)")
_seed_opt = click.option("--seed", type=int, default=None, help="random seed")
_epsilon_opt = click.option(
    "--epsilon", type=float, default=None, help="domain cutoff for divergent weightings"
)


@cli.command("curve")
@_input_opt
@_schema_opt
@click.option("--grid", default=None, help="thresholds: 't1,t2,..' or 'start:stop:step'")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@_output_opt
def cmd_curve(input_path, schema_text, grid, fmt, output):
    """Decision curve for every model plus treat-all / treat-none baselines."""
    ds = _load(input_path, schema_text)
    table = decision_curve(ds, grid=_parse_grid(grid))
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv_module.writer(buffer)
        names = list(table.policies)
        writer.writerow(["threshold", *names])
        for i, t in enumerate(table.grid):
            writer.writerow([repr(float(t))] + [repr(float(table.policies[m][i])) for m in names])
        _emit(buffer.getvalue().rstrip("\n"), output)
    else:
        config = {"input": input_path, "schema": schema_text, "grid": grid}
        _emit(_json_report("curve", config, table.to_rows()), output)


@cli.command("cnb")
@_input_opt
@_schema_opt
@click.option("--weights", "weights_text", required=True, help="JSON, file, or preset:NAME")
@click.option("--bootstrap", "replicates", type=int, default=0, help="CI replicates (0 = none)")
@click.option("--level", type=float, default=0.95, show_default=True)
@_seed_opt
@_epsilon_opt
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_output_opt
def cmd_cnb(input_path, schema_text, weights_text, replicates, level, seed, epsilon, fmt, output):
    """Continuous net benefit of each model under a threshold weighting."""
    ds = _load(input_path, schema_text)
    spec = _parse_weights(weights_text, epsilon)
    quad = _quad_config(epsilon)
    prevalence = summarize(ds).prevalence

    results = {"treat_all": {"estimate": treat_all_cnb(prevalence, spec, quad), "unit": spec.unit}}
    for model in ds.models:
        estimate = continuous_net_benefit(ds, model, spec, quad)
        entry = estimate.to_dict()
        if replicates > 0:
            boot = bootstrap_ci(
                cnb_statistic(model, spec, quad),
                ds,
                BootstrapConfig(replicates=replicates, level=level, seed=seed),
            )
            entry["ci"] = {"lower": boot.lower, "upper": boot.upper, "level": level}
        results[model] = entry

    if fmt == "json":
        config = {
            "input": input_path,
            "schema": schema_text,
            "weights": weights_text,
            "bootstrap": replicates,
            "level": level,
            "seed": seed,
            "epsilon": epsilon,
        }
        _emit(_json_report("cnb", config, results), output)
    else:
        lines = [f"continuous net benefit ({spec.unit}, per 100 people)"]
        for name, entry in results.items():
            value = entry.get("value", entry.get("estimate"))
            line = f"  {name:>12s}: {100.0 * value:8.4f}"
            if entry.get("ci"):
                ci = entry["ci"]
                line += (
                    f"  ({100 * ci['level']:.0f}% CI {100.0 * ci['lower']:.4f}"
                    f" to {100.0 * ci['upper']:.4f})"
                )
            lines.append(line)
        _emit("\n".join(lines), output)


@cli.command("compare")
@_input_opt
@_schema_opt
@click.option("--weights", "weights_text", required=True, help="JSON, file, or preset:NAME")
@click.option("--models", "models_text", default=None, help="MODEL1,MODEL2 (default: first two)")
@click.option("--bootstrap", "replicates", type=int, default=0)
@click.option("--level", type=float, default=0.95, show_default=True)
@_seed_opt
@_epsilon_opt
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_output_opt
def cmd_compare(
    input_path, schema_text, weights_text, models_text, replicates, level, seed, epsilon, fmt, output
):
    """Difference in continuous net benefit between two models.

    A uniform weighting is allowed here: the difference equals the
    per-capita log-likelihood difference even though the absolute values
    diverge."""
    ds = _load(input_path, schema_text)
    if models_text is not None:
        names = [m.strip() for m in models_text.split(",") if m.strip()]
    else:
        names = list(ds.models)
    if len(names) < 2:
        raise ValidationError("compare needs two models")
    model1, model2 = names[0], names[1]
    spec = _parse_weights(weights_text, epsilon)
    quad = _quad_config(epsilon)
    difference = cnb_difference(ds, model1, model2, spec, quad)
    result = {
        "models": [model1, model2],
        "difference": difference,
        "unit": spec.unit,
    }
    if isinstance(spec, UniformWeight):
        result["note"] = "equals per-capita log-likelihood difference"
    if replicates > 0:
        boot = bootstrap_ci(
            cnb_difference_statistic(model1, model2, spec, quad),
            ds,
            BootstrapConfig(replicates=replicates, level=level, seed=seed),
        )
        result["ci"] = {"lower": boot.lower, "upper": boot.upper, "level": level}
    if fmt == "json":
        config = {
            "input": input_path,
            "schema": schema_text,
            "weights": weights_text,
            "models": models_text,
            "bootstrap": replicates,
            "level": level,
            "seed": seed,
            "epsilon": epsilon,
        }
        _emit(_json_report("compare", config, result), output)
    else:
        lines = [
            f"CNB({model1}) - CNB({model2}) = {difference:.6f} per capita "
            f"({100.0 * difference:.4f} per 100 people)"
        ]
        if "note" in result:
            lines.append(f"  note: {result['note']}")
        if "ci" in result:
            ci = result["ci"]
            lines.append(
                f"  {100 * ci['level']:.0f}% CI: {ci['lower']:.6f} to {ci['upper']:.6f}"
            )
        _emit("\n".join(lines), output)


@cli.command("oracle")
@click.option("--n", type=int, default=6, show_default=True, help="population size")
@click.option(
    "--mode",
    type=click.Choice(["exhaustive", "monte-carlo"]),
    default="exhaustive",
    show_default=True,
)
@click.option("--permutations", type=int, default=200, show_default=True)
@_seed_opt
@click.option("--witness", is_flag=True, help="search for an area-summary disagreement")
@click.option("--two-group", "two_group", is_flag=True, help="run the two-group importance demo")
@_output_opt
def cmd_oracle(n, mode, permutations, seed, witness, two_group, output):
    """Brute-force verification of the expected-net-benefit identity."""
    if mode == "exhaustive" and n > 8:
        raise ValidationError(f"exhaustive mode supports n <= 8, got n={n}")
    config = GeneratorConfig(
        n=n,
        thresholds=UniformThresholds(0.05, 0.6),
        importance_scale=1.0,
        seed=seed if seed is not None else 0,
    )
    population = generate_population(config)
    report = verify_expected_nb(
        population, "full", "compact", mode=mode, permutations=permutations, seed=seed
    )
    result: dict = {"identity_check": report.to_dict()}

    if witness:
        found = aunb_disagreement_witness()
        result["witness"] = found.to_dict() if found is not None else None
        result["witness_found"] = found is not None
    if two_group:
        pop = two_group_scenario(seed=seed if seed is not None else 0)
        result["two_group"] = {
            "importance_by_threshold": group_importance(pop),
            "delta_utility_share_by_group": group_delta_shares(pop, "calibrated", "noisy"),
        }
    config_echo = {
        "n": n,
        "mode": mode,
        "permutations": permutations,
        "seed": seed,
        "witness": witness,
        "two_group": two_group,
    }
    _emit(_json_report("oracle", config_echo, result), output)
    if not report.passed:
        raise NumericError(
            f"identity check failed: |delta| = {report.error:.3g} "
            f"exceeds tolerance {report.tolerance:.3g}"
        )


@cli.command("demo")
@click.option("--n", type=int, default=4000, show_default=True)
@_seed_opt
@click.option("--bootstrap", "replicates", type=int, default=0, help="CI/optimism replicates")
@click.option("--level", type=float, default=0.95, show_default=True)
@_epsilon_opt
@click.option("--combine-ratio", type=float, default=None, help="report a combined net benefit")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="json")
@_output_opt
def cmd_demo(n, seed, replicates, level, epsilon, combine_ratio, fmt, output):
    """End-to-end synthetic pipeline: fit two models, evaluate all weightings."""
    from netbenefit.demo import DemoConfig, run_demo

    cfg = DemoConfig(
        n=n,
        seed=seed if seed is not None else 7,
        bootstrap=replicates,
        level=level,
        epsilon=epsilon if epsilon is not None else 1e-6,
        combine_ratio=combine_ratio,
    )
    report = run_demo(cfg)
    if fmt == "json":
        config_echo = {
            "n": n,
            "seed": seed,
            "bootstrap": replicates,
            "level": level,
            "epsilon": epsilon,
            "combine_ratio": combine_ratio,
        }
        _emit(_json_report("demo", config_echo, report), output)
    else:
        lines = [f"demo cohort: n={report['n']}, prevalence {report['prevalence']:.4f}"]
        for section in ("multi_intervention", "threshold_distribution"):
            lines.append(section.replace("_", " ") + ":")
            for label, table in report[section].items():
                lines.append(f"  {label} (per 100 people):")
                for policy, entry in table["policies"].items():
                    line = f"    {policy:>10s}: {entry['per_100']:8.4f}"
                    if "ci" in entry:
                        ci = entry["ci"]
                        line += f"  CI {100 * ci['lower']:.4f} to {100 * ci['upper']:.4f}"
                    if "corrected" in entry:
                        line += f"  corrected {100 * entry['corrected']:.4f}"
                    lines.append(line)
        if "combined" in report:
            lines.append(f"combined (ratio {report['combined']['effect_ratio']}):")
            for policy, entry in report["combined"]["policies"].items():
                lines.append(f"    {policy:>10s}: {entry['per_100']:8.4f}")
        _emit("\n".join(lines), output)


def main(argv: list[str] | None = None) -> int:
    """Entry point with error-to-exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 4
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except NumericError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        return 3
    except NetBenefitError as exc:
        click.echo(f"error: {exc}", err=True)
        return 4
    except Exception as exc:  # noqa: BLE001 -- last-resort mapping to exit 4
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return 4


if __name__ == "__main__":
    sys.exit(main())
