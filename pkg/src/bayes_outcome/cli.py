"""Command-line interface.

Exit status: 0 on success, 1 for invalid input or arguments, 2 when a
well-formed input cannot be fitted or integrated.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from dataclasses import replace
from pathlib import Path

from . import _accel
from .data import SimConfig, project_features, rank_features_by_correlation, simulate_dataset
from .evaluation import auc, benchmark_table, evaluate, roc_curve
from .exceptions import ComputationError, ValidationError
from .io import load_dataset, load_queries, read_scored, write_dataset, write_points, write_report, write_scored
from .predictors import Method, PredictorConfig, classify, fit_model, predict_proba
from .quadrature import DEFAULT_CHISQUARE_NODES, DEFAULT_HERMITE_NODES


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_sim_flags(p):
    p.add_argument("--n0", type=int, default=50)
    p.add_argument("--n1", type=int, default=50)
    p.add_argument("--mu0", type=float, default=0.0)
    p.add_argument("--mu1", type=float, default=0.0)
    p.add_argument("--lambda0", type=float, default=0.24)
    p.add_argument("--lambda1", type=float, default=0.28)


def _add_method_flags(p):
    p.add_argument("--method", default="lold", choices=[m.value for m in Method])
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--hermite-nodes", type=int, default=DEFAULT_HERMITE_NODES)
    p.add_argument("--chisquare-nodes", type=int, default=DEFAULT_CHISQUARE_NODES)
    p.add_argument("--lold-form", default="sigmoid", choices=["sigmoid", "step"])
    p.add_argument("--include-log-e", action="store_true", help="add log(E)/d to the LOLD exponent")
    p.add_argument("--check-convergence", action="store_true", help="re-run quadrature with doubled nodes")


def _config(args) -> PredictorConfig:
    return PredictorConfig(
        method=args.method,
        hermite_nodes=args.hermite_nodes,
        chisquare_nodes=args.chisquare_nodes,
        lold_form=args.lold_form,
        check_convergence=args.check_convergence,
        include_log_e=args.include_log_e,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bayes-outcome", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="draw an isotropic two-class Gaussian dataset")
    _add_sim_flags(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rank", help="rank features by |correlation| with the label")
    p.add_argument("--data", required=True)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--out", required=True, help="ranked indices CSV")
    p.add_argument("--projected-out", default=None, help="write the top-k projected dataset here")

    p = sub.add_parser("predict", help="class-1 probabilities for query points")
    p.add_argument("--train", required=True)
    p.add_argument("--query", required=True, help="CSV with d feature columns, optionally preceded by a label column")
    _add_method_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("loocv", help="leave-one-out scores and report")
    p.add_argument("--data", required=True)
    _add_method_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="scored-sample CSV")
    p.add_argument("--report", default=None, help="report JSON (default: OUT with .json suffix)")

    p = sub.add_parser("roc", help="ROC points and AUC from a scored-sample CSV")
    p.add_argument("--scores", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("benchmark", help="accuracy table over dimensions and methods")
    _add_sim_flags(p)
    p.add_argument("--dims", type=_int_list, default=[3, 10, 100, 1000, 10000])
    p.add_argument("--methods", default="lold", help="comma-separated subset of fd,ld,lold,baseline")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--hermite-nodes", type=int, default=DEFAULT_HERMITE_NODES)
    p.add_argument("--chisquare-nodes", type=int, default=DEFAULT_CHISQUARE_NODES)
    p.add_argument("--fd-max-d", type=int, default=10)
    p.add_argument("--ld-max-d", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _check_threshold(t: float) -> None:
    if not 0.0 < t < 1.0:
        raise ValidationError(f"--threshold must lie in (0, 1), got {t}")


def _warn_lines(caught) -> list[str]:
    lines = [str(w.message) for w in caught]
    for line in lines:
        print(f"warning: {line}", file=sys.stderr)
    return lines


def _cmd_simulate(args):
    cfg = SimConfig(args.n0, args.n1, args.d, args.mu0, args.mu1, args.lambda0, args.lambda1, args.seed)
    write_dataset(simulate_dataset(cfg), args.out)


def _cmd_rank(args):
    ds = load_dataset(args.data)
    ranked = rank_features_by_correlation(ds)
    k = len(ranked) if args.top_k is None else args.top_k
    if not 1 <= k <= len(ranked):
        raise ValidationError(f"--top-k must be in [1, {len(ranked)}]")
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "feature_index", "abs_correlation"])
        for r, (j, c) in enumerate(ranked[:k]):
            w.writerow([r, j, repr(c)])
    if args.projected_out:
        write_dataset(project_features(ds, [j for j, _ in ranked[:k]]), args.projected_out)


def _cmd_predict(args):
    train = load_dataset(args.train)
    queries = load_queries(args.query, train.d)
    config = _config(args)
    _check_threshold(args.threshold)
    model = fit_model(train)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        probs = [predict_proba(model, q, config) for q in queries]
    _warn_lines(caught)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "probability", "label"])
        for i, p in enumerate(probs):
            w.writerow([i, repr(p), classify(p, args.threshold)])


def _cmd_loocv(args):
    ds = load_dataset(args.data)
    config = _config(args)
    _check_threshold(args.threshold)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report, held, _ = evaluate(ds, config, args.threshold, n_jobs=args.jobs)
    report.extra["warnings"] = _warn_lines(caught)
    report.extra["kernel_backend"] = _accel.backend()
    write_scored(held, args.out)
    write_report(report, args.report or Path(args.out).with_suffix(".json"), config=config)
    print(f"accuracy={report.accuracy!r} auc={report.auc!r} wall_time={report.wall_time:.3f}s")


def _cmd_roc(args):
    scored = read_scored(args.scores)
    points = roc_curve(scored)
    write_points(points, args.out)
    print(f"auc={auc(points)!r}")


def _cmd_benchmark(args):
    methods = [Method.parse(m.strip()) for m in args.methods.split(",") if m.strip()]
    sim = SimConfig(args.n0, args.n1, 3, args.mu0, args.mu1, args.lambda0, args.lambda1, 0)
    config = PredictorConfig(hermite_nodes=args.hermite_nodes, chisquare_nodes=args.chisquare_nodes)
    _check_threshold(args.threshold)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reports = benchmark_table(
            sim,
            args.dims,
            methods,
            repeats=args.repeats,
            seed=args.seed,
            threshold=args.threshold,
            max_dim={Method.FD: args.fd_max_d, Method.LD: args.ld_max_d},
            config=config,
            n_jobs=args.jobs,
        )
    lines = _warn_lines(caught)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "table.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["d", "method", "threshold", "accuracy", "accuracy_se", "train_error", "test_error", "auc", "repeats", "wall_time_s"])
        for r in reports:
            w.writerow([r.d, r.method, r.threshold, repr(r.accuracy), repr(r.accuracy_se), repr(r.train_error), repr(r.test_error), repr(r.auc), r.repeats, f"{r.wall_time:.3f}"])
            r.extra["warnings"] = lines
            r.extra["kernel_backend"] = _accel.backend()
            write_report(r, out / f"report_d{r.d}_{r.method}.json", config=replace(config, method=r.method), seed=args.seed)
    for r in reports:
        print(f"d={r.d:<6} {r.method:<9} accuracy={r.accuracy:.3f} +/- {r.accuracy_se:.3f}  time={r.wall_time:.2f}s")


_COMMANDS = {
    "simulate": _cmd_simulate,
    "rank": _cmd_rank,
    "predict": _cmd_predict,
    "loocv": _cmd_loocv,
    "roc": _cmd_roc,
    "benchmark": _cmd_benchmark,
}


def run_command(argv=None) -> int:
    """Run one CLI invocation and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputationError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
