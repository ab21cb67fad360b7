"""Leave-one-out evaluation, ROC analysis and the accuracy-table runner."""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .data import Dataset, SimConfig, simulate_dataset
from .exceptions import ComputationError, ValidationError
from .predictors import Method, PredictorConfig, classify, fit_model, predict_proba

LOOCV = "loocv-held-out"
TRAINING = "training"

# largest d each method is run at by default, matching the reference runs
DEFAULT_MAX_DIM = {Method.FD: 10, Method.LD: 100}


@dataclass(frozen=True)
class ScoredSample:
    index: int
    true_label: int
    score: float
    fold: str = LOOCV


@dataclass
class EvaluationReport:
    method: str
    d: int
    threshold: float
    accuracy: float
    train_error: float
    test_error: float
    roc: list[tuple[float, float]]
    auc: float
    wall_time: float
    repeats: int = 1
    accuracy_se: float = 0.0
    extra: dict = field(default_factory=dict)


def _score_fold(dataset: Dataset, i: int, config: PredictorConfig) -> ScoredSample:
    try:
        model = fit_model(dataset.without(i))
    except ComputationError as exc:
        raise type(exc)(f"holding out sample {i}: {exc}") from exc
    x, y = dataset.features[i], int(dataset.labels[i])
    return ScoredSample(i, y, predict_proba(model, x, config), LOOCV)


def loocv(dataset: Dataset, config: PredictorConfig, n_jobs: int = 1) -> list[ScoredSample]:
    """Score every sample with a model refitted on all the others.

    Class proportions are recomputed per fold. With ``n_jobs > 1`` folds run
    on a thread pool; results are always returned in dataset order.
    """
    dataset.require_both_classes()
    idx = range(len(dataset))
    if n_jobs == 1:
        return [_score_fold(dataset, i, config) for i in idx]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda i: _score_fold(dataset, i, config), idx))


def training_scores(dataset: Dataset, config: PredictorConfig) -> list[ScoredSample]:
    """In-sample scores of a model fitted on the full dataset."""
    model = fit_model(dataset)
    return [
        ScoredSample(i, int(y), predict_proba(model, x, config), TRAINING)
        for i, (x, y) in enumerate(zip(dataset.features, dataset.labels))
    ]


def error_rate(scored: Sequence[ScoredSample], threshold: float = 0.5) -> float:
    if not scored:
        raise ValidationError("no scored samples")
    wrong = sum(classify(s.score, threshold) != s.true_label for s in scored)
    return wrong / len(scored)


def roc_curve(scored: Sequence[ScoredSample]) -> list[tuple[float, float]]:
    """ROC points from a descending threshold sweep over the distinct scores.

    A sample counts as positive when ``score >= threshold``. The curve
    starts at (0, 0) and ends at (1, 1).
    """
    scores = np.array([s.score for s in scored], dtype=np.float64)
    labels = np.array([s.true_label for s in scored], dtype=np.int64)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("ROC needs both labels present")
    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], labels[order]
    tp = np.cumsum(y)
    fp = np.cumsum(1 - y)
    # last position of each run of tied scores
    last = np.r_[np.flatnonzero(s[1:] != s[:-1]), s.size - 1]
    points = [(0.0, 0.0)]
    points += [(fp[k] / n_neg, tp[k] / n_pos) for k in last]
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    return [(float(a), float(b)) for a, b in points]


def auc(roc: Sequence[tuple[float, float]]) -> float:
    """Trapezoidal area under an ROC curve."""
    pts = np.asarray(roc, dtype=np.float64)
    return float(np.trapezoid(pts[:, 1], pts[:, 0]))


def evaluate(dataset: Dataset, config: PredictorConfig, threshold: float = 0.5, n_jobs: int = 1) -> tuple[EvaluationReport, list[ScoredSample], list[ScoredSample]]:
    """LOOCV plus in-sample scoring of one dataset.

    Returns the report and both lists of scored samples (held-out, training).
    """
    start = time.perf_counter()
    held_out = loocv(dataset, config, n_jobs=n_jobs)
    wall = time.perf_counter() - start
    train = training_scores(dataset, config)
    test_error = error_rate(held_out, threshold)
    roc = roc_curve(held_out)
    report = EvaluationReport(
        method=config.method.value,
        d=dataset.d,
        threshold=threshold,
        accuracy=1.0 - test_error,
        train_error=error_rate(train, threshold),
        test_error=test_error,
        roc=roc,
        auc=auc(roc),
        wall_time=wall,
    )
    return report, held_out, train


def repeat_seeds(seed: int, repeats: int) -> list[int]:
    """Independent integer seeds for simulation repeats."""
    children = np.random.SeedSequence(seed).spawn(repeats)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def benchmark_table(
    sim: SimConfig,
    dims: Sequence[int],
    methods: Sequence,
    repeats: int = 10,
    seed: int = 0,
    threshold: float = 0.5,
    max_dim: dict | None = None,
    config: PredictorConfig | None = None,
    n_jobs: int = 1,
) -> list[EvaluationReport]:
    """Average LOOCV accuracy per (dimension, method) over simulated repeats.

    The same simulated datasets are shared by every method at a given
    dimension. Methods are skipped above their ``max_dim`` entry (FD above
    d = 10 and LD above d = 100 by default). ROC and AUC are computed from
    the held-out scores pooled over repeats; ``accuracy_se`` is the
    binomial standard error over all held-out predictions.
    """
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    limits = dict(DEFAULT_MAX_DIM)
    if max_dim:
        limits.update({Method.parse(k): v for k, v in max_dim.items()})
    methods = [Method.parse(m) for m in methods]
    base = config or PredictorConfig()
    seeds = repeat_seeds(seed, repeats)
    reports = []
    for d in dims:
        datasets = [simulate_dataset(replace(sim, d=int(d), seed=s)) for s in seeds]
        for method in methods:
            if d > limits.get(method, math.inf):
                continue
            cfg = replace(base, method=method)
            per_rep, pooled = [], []
            for ds in datasets:
                rep, held, _ = evaluate(ds, cfg, threshold, n_jobs=n_jobs)
                per_rep.append(rep)
                pooled.extend(held)
            test_error = float(np.mean([r.test_error for r in per_rep]))
            n_total = len(pooled)
            acc = 1.0 - test_error
            roc = roc_curve(pooled)
            reports.append(
                EvaluationReport(
                    method=method.value,
                    d=int(d),
                    threshold=threshold,
                    accuracy=acc,
                    train_error=float(np.mean([r.train_error for r in per_rep])),
                    test_error=test_error,
                    roc=roc,
                    auc=auc(roc),
                    wall_time=float(sum(r.wall_time for r in per_rep)),
                    repeats=repeats,
                    accuracy_se=math.sqrt(acc * (1.0 - acc) / n_total),
                    extra={"per_repeat_accuracy": [r.accuracy for r in per_rep]},
                )
            )
    return reports
