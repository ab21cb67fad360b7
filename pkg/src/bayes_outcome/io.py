"""CSV dataset files, scored-sample files and JSON report files.

Dataset CSV: first column ``label`` (0/1), then one column per feature.
A header row is optional and is recognised by being non-numeric. Floats
are written with ``repr`` so values round-trip exactly.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
from importlib import metadata
from pathlib import Path
from typing import Sequence

import numpy as np

from .data import Dataset
from .evaluation import EvaluationReport, ScoredSample
from .exceptions import ValidationError
from .posterior import LOG_E_CONVENTION, LOG_E_SIGN


def artifact_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        from . import __version__

        return __version__


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]


def load_dataset(path) -> Dataset:
    rows = _read_rows(path)
    start = 0
    if rows and not all(_is_number(c) for c in rows[0]):
        start = 1
    rows = rows[start:]
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    width = len(rows[0])
    if width < 2:
        raise ValidationError(f"{path}: need a label column and at least one feature column")
    x = np.empty((len(rows), width - 1))
    y = np.empty(len(rows), dtype=np.int8)
    for r, row in enumerate(rows):
        line = r + start + 1
        if len(row) != width:
            raise ValidationError(f"{path}: row {line} has {len(row)} columns, expected {width}")
        try:
            label = float(row[0])
        except ValueError:
            raise ValidationError(f"{path}: row {line}, column 1: label {row[0]!r} is not numeric") from None
        if label not in (0.0, 1.0):
            raise ValidationError(f"{path}: row {line}, column 1: label {row[0]!r} is not 0 or 1")
        y[r] = int(label)
        for c, cell in enumerate(row[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ValidationError(f"{path}: row {line}, column {c}: {cell!r} is not a number") from None
            if not math.isfinite(v):
                raise ValidationError(f"{path}: row {line}, column {c}: non-finite value {cell!r}")
            x[r, c - 2] = v
    return Dataset(x, y)


def load_queries(path, d: int) -> np.ndarray:
    """Query matrix with ``d`` feature columns.

    The file may carry a leading label column (ignored) and a header row.
    """
    rows = _read_rows(path)
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    if not rows:
        raise ValidationError(f"{path}: no query rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValidationError(f"{path}: ragged rows")
    width = widths.pop()
    if width not in (d, d + 1):
        raise ValidationError(f"{path}: {width} columns, training data has d={d} features")
    try:
        q = np.array([[float(c) for c in r] for r in rows])
    except ValueError:
        raise ValidationError(f"{path}: non-numeric value") from None
    if not np.all(np.isfinite(q)):
        raise ValidationError(f"{path}: non-finite value")
    return q[:, width - d:]


def write_dataset(dataset: Dataset, path, header: bool = True) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(["label"] + [f"x{j}" for j in range(dataset.d)])
        for x, y in zip(dataset.features, dataset.labels):
            w.writerow([int(y)] + [repr(float(v)) for v in x])


def write_scored(scored: Sequence[ScoredSample], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "true_label", "score", "fold"])
        for s in scored:
            w.writerow([s.index, s.true_label, repr(float(s.score)), s.fold])


def read_scored(path) -> list[ScoredSample]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"true_label", "score"} - set(reader.fieldnames or ())
        if missing:
            raise ValidationError(f"{path}: missing columns {sorted(missing)}")
        out = []
        for k, row in enumerate(reader):
            try:
                label = int(float(row["true_label"]))
                score = float(row["score"])
            except ValueError:
                raise ValidationError(f"{path}: row {k + 2} is not numeric") from None
            if label not in (0, 1) or not 0.0 <= score <= 1.0:
                raise ValidationError(f"{path}: row {k + 2} has label {label} / score {score}")
            index = int(row["index"]) if row.get("index") not in (None, "") else k
            out.append(ScoredSample(index, label, score, row.get("fold") or "loocv-held-out"))
    return out


def write_points(points, path, header=("fpr", "tpr")) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for p in points:
            w.writerow([repr(float(v)) for v in p])


def report_to_dict(report: EvaluationReport, config=None, seed=None) -> dict:
    """JSON-ready mapping of a report plus provenance fields."""
    doc = dataclasses.asdict(report)
    doc["roc"] = [list(p) for p in report.roc]
    doc["config"] = {} if config is None else _config_dict(config)
    doc["seed"] = seed
    doc["artifact_version"] = artifact_version()
    doc["log_e_sign"] = LOG_E_SIGN
    doc["log_e_convention"] = LOG_E_CONVENTION
    return doc


def _config_dict(config) -> dict:
    out = {}
    for f in dataclasses.fields(config):
        v = getattr(config, f.name)
        out[f.name] = getattr(v, "value", v)
    return out


def report_from_dict(doc: dict) -> EvaluationReport:
    names = {f.name for f in dataclasses.fields(EvaluationReport)}
    kw = {k: v for k, v in doc.items() if k in names}
    kw["roc"] = [tuple(p) for p in kw["roc"]]
    return EvaluationReport(**kw)


def write_report(report: EvaluationReport, path, config=None, seed=None) -> None:
    Path(path).write_text(json.dumps(report_to_dict(report, config, seed), indent=2) + "\n")


def read_report(path) -> EvaluationReport:
    return report_from_dict(json.loads(Path(path).read_text()))
