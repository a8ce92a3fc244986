"""Evaluation datasets: per-subject model scores, binary outcomes, weights.

Datasets are immutable after construction and safe to share across threads.
Scores of exactly 0 or 1 are accepted here; operations that need logarithms
reject them at call time instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from netbenefit.errors import ValidationError


@dataclass(frozen=True)
class ColumnSchema:
    """Maps CSV columns onto dataset fields.

    ``scores`` maps model id -> column name; by default the model id is the
    column name itself.  ``weight`` is optional (missing means weight 1).
    """

    outcome: str
    scores: dict[str, str]
    weight: str | None = None

    @classmethod
    def from_string(cls, text: str) -> "ColumnSchema":
        """Parse ``outcome=COL,scores=COL1:COL2[,weight=COL]``."""
        outcome = None
        scores: dict[str, str] = {}
        weight = None
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ValidationError(f"schema entry {part!r} is not key=value")
            key, _, value = part.partition("=")
            if key == "outcome":
                outcome = value
            elif key == "scores":
                for col in value.split(":"):
                    if not col:
                        raise ValidationError("empty score column name in schema")
                    scores[col] = col
            elif key == "weight":
                weight = value
            else:
                raise ValidationError(f"unknown schema key {key!r}")
        if outcome is None:
            raise ValidationError("schema must name an outcome column")
        if not scores:
            raise ValidationError("schema must name at least one score column")
        return cls(outcome=outcome, scores=scores, weight=weight)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class EvaluationDataset:
    """Per-subject scores for one or more models, outcome, and weight.

    ``row_ids`` track each record's row in the dataset it was originally
    built from; bootstrap resamples keep them, so procedures that need
    per-subject side information (e.g. refitting on covariates) can look it
    up by id.
    """

    scores: dict[str, np.ndarray]
    outcomes: np.ndarray
    weights: np.ndarray
    row_ids: np.ndarray | None = None
    models: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        y = np.asarray(self.outcomes, dtype=np.float64)
        n = y.shape[0]
        if n == 0:
            raise ValidationError("dataset has no subjects")
        ids = self.row_ids if self.row_ids is not None else np.arange(n)
        ids = np.ascontiguousarray(ids, dtype=np.int64)
        if ids.shape != (n,):
            raise ValidationError("row_ids length does not match outcomes")
        ids.flags.writeable = False
        object.__setattr__(self, "row_ids", ids)
        if not np.all((y == 0.0) | (y == 1.0)):
            bad = int(np.flatnonzero((y != 0.0) & (y != 1.0))[0])
            raise ValidationError(f"outcome of subject {bad} is not 0 or 1")
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (n,):
            raise ValidationError("weights length does not match outcomes")
        if not np.all(np.isfinite(w)):
            bad = int(np.flatnonzero(~np.isfinite(w))[0])
            raise ValidationError(f"weight of subject {bad} is not finite")
        if np.any(w < 0):
            bad = int(np.flatnonzero(w < 0)[0])
            raise ValidationError(f"weight of subject {bad} is negative")
        total = float(np.sum(w))
        if total <= 0:
            raise ValidationError("total weight must be positive")
        if not self.scores:
            raise ValidationError("dataset declares no models")
        clean: dict[str, np.ndarray] = {}
        for model, f in self.scores.items():
            f = np.asarray(f, dtype=np.float64)
            if f.shape != (n,):
                raise ValidationError(f"scores of model {model!r} do not match subject count")
            if not np.all(np.isfinite(f)) or np.any(f < 0) or np.any(f > 1):
                bad = int(np.flatnonzero(~np.isfinite(f) | (f < 0) | (f > 1))[0])
                raise ValidationError(
                    f"score {f[bad]!r} of model {model!r}, subject {bad}, is outside [0, 1]"
                )
            clean[model] = _readonly(f)
        object.__setattr__(self, "scores", clean)
        object.__setattr__(self, "outcomes", _readonly(y))
        object.__setattr__(self, "weights", _readonly(w))
        object.__setattr__(self, "models", tuple(clean))

    @property
    def n(self) -> int:
        return int(self.outcomes.shape[0])

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def model_scores(self, model: str) -> np.ndarray:
        if model not in self.scores:
            raise ValidationError(f"unknown model {model!r}; dataset has {list(self.models)}")
        return self.scores[model]

    def take(self, indices: np.ndarray) -> "EvaluationDataset":
        """Row subset / resample (used by the bootstrap)."""
        return EvaluationDataset(
            scores={m: f[indices] for m, f in self.scores.items()},
            outcomes=self.outcomes[indices],
            weights=self.weights[indices],
            row_ids=self.row_ids[indices],
        )

    def with_model(self, model: str, scores: np.ndarray) -> "EvaluationDataset":
        """Copy of the dataset with an extra (or replaced) score column."""
        new = dict(self.scores)
        new[model] = np.asarray(scores, dtype=np.float64)
        return EvaluationDataset(
            scores=new, outcomes=self.outcomes, weights=self.weights, row_ids=self.row_ids
        )


@dataclass(frozen=True)
class DatasetSummary:
    n: int
    total_weight: float
    prevalence: float
    models: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "total_weight": self.total_weight,
            "prevalence": self.prevalence,
            "models": list(self.models),
        }


def summarize(ds: EvaluationDataset) -> DatasetSummary:
    """Weighted prevalence and size of a dataset."""
    prevalence = float(np.dot(ds.weights, ds.outcomes) / np.sum(ds.weights))
    return DatasetSummary(
        n=ds.n, total_weight=ds.total_weight, prevalence=prevalence, models=ds.models
    )


def _parse_cell(raw: str, row: int, column: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(
            f"row {row}, column {column!r}: {raw!r} is not numeric"
        ) from None


def load_csv(path, schema: ColumnSchema) -> EvaluationDataset:
    """Load a dataset from a headered CSV file.

    Comma separated, UTF-8, ``.`` decimal point.  Row numbers in error
    messages are file line numbers (the header is line 1).  Row order is
    preserved.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: file is empty") from None
        columns = {name: i for i, name in enumerate(header)}
        needed = [schema.outcome, *schema.scores.values()]
        if schema.weight is not None:
            needed.append(schema.weight)
        for name in needed:
            if name not in columns:
                raise ValidationError(f"{path}: missing column {name!r}")

        outcomes: list[float] = []
        weights: list[float] = []
        score_cols: dict[str, list[float]] = {m: [] for m in schema.scores}
        for line, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValidationError(f"row {line}: expected {len(header)} cells, got {len(row)}")
            y = _parse_cell(row[columns[schema.outcome]], line, schema.outcome)
            if y not in (0.0, 1.0):
                raise ValidationError(
                    f"row {line}, column {schema.outcome!r}: outcome {y!r} is not 0 or 1"
                )
            outcomes.append(y)
            for model, col in schema.scores.items():
                f = _parse_cell(row[columns[col]], line, col)
                if not 0.0 <= f <= 1.0:
                    raise ValidationError(
                        f"row {line}, column {col!r}: score {f!r} outside [0, 1]"
                    )
                score_cols[model].append(f)
            if schema.weight is not None:
                w = _parse_cell(row[columns[schema.weight]], line, schema.weight)
                if w < 0:
                    raise ValidationError(
                        f"row {line}, column {schema.weight!r}: weight {w!r} is negative"
                    )
                weights.append(w)
            else:
                weights.append(1.0)
        if not outcomes:
            raise ValidationError(f"{path}: no data rows")

    return EvaluationDataset(
        scores={m: np.array(v) for m, v in score_cols.items()},
        outcomes=np.array(outcomes),
        weights=np.array(weights),
    )


def save_csv(ds: EvaluationDataset, path, schema: ColumnSchema | None = None) -> None:
    """Write a dataset back to CSV so that reloading round-trips bit-identically."""
    if schema is None:
        schema = ColumnSchema(outcome="outcome", scores={m: m for m in ds.models}, weight="weight")
    header = [schema.outcome, *[schema.scores[m] for m in ds.models]]
    if schema.weight is not None:
        header.append(schema.weight)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(ds.n):
            row = [repr(float(ds.outcomes[i]))]
            row += [repr(float(ds.scores[m][i])) for m in ds.models]
            if schema.weight is not None:
                row.append(repr(float(ds.weights[i])))
            writer.writerow(row)
