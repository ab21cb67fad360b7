"""Class-1 probability predictors: FD, LD, LOLD and the plug-in baseline."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _accel
from .data import ClassSummary, Dataset, summarize_class
from .exceptions import DimensionError, QuadratureConvergenceWarning, ValidationError, ZeroVarianceError
from .posterior import (
    ClassPosterior,
    PredictiveStats,
    _check_imbalance,
    fit_hyperparameters,
    lambda10,
    predictive_statistics,
)
from .quadrature import DEFAULT_CHISQUARE_NODES, DEFAULT_HERMITE_NODES, chisquare_rule, hermite_rule

CONVERGENCE_TOL = 1e-4


class Method(str, Enum):
    FD = "fd"
    LD = "ld"
    LOLD = "lold"
    BASELINE = "baseline"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(
                f"unknown method {value!r}; choose from {[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class PredictorConfig:
    """Which predictor to run and how finely to integrate.

    ``check_convergence`` re-evaluates FD/LD with doubled node counts and
    emits :class:`QuadratureConvergenceWarning` if the value moves by more
    than ``1e-4``. ``include_log_e`` adds the sub-leading class-imbalance
    term to the LOLD exponent (off by default).
    """

    method: Method = Method.LOLD
    hermite_nodes: int = DEFAULT_HERMITE_NODES
    chisquare_nodes: int = DEFAULT_CHISQUARE_NODES
    lold_form: str = "sigmoid"
    check_convergence: bool = False
    include_log_e: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method.parse(self.method))
        if self.method in (Method.FD, Method.LD):
            if self.hermite_nodes < 2:
                raise ValidationError("hermite_nodes must be >= 2")
            if self.method is Method.FD and self.chisquare_nodes < 2:
                raise ValidationError("chisquare_nodes must be >= 2")
        if self.lold_form not in ("sigmoid", "step"):
            raise ValidationError(f"lold_form must be 'sigmoid' or 'step', got {self.lold_form!r}")


def _require_analytic_dim(d: int) -> None:
    if d < 3:
        raise DimensionError(f"dimension below analytic validity: d = {d} < 3")


def _shifted_squares(a: float, y_tilde: float, h) -> np.ndarray:
    return a * (h.nodes - y_tilde) ** 2


def _fd_value(stats: PredictiveStats, hermite_nodes: int, chisquare_nodes: int) -> float:
    d = stats.d
    h = hermite_rule(hermite_nodes)
    c = chisquare_rule(d - 1, chisquare_nodes)
    # class-1 and class-0 halves of the exponent on their own 2-D grids
    u = (stats.a1 * c.nodes[:, None] + _shifted_squares(stats.a1, stats.y1_tilde, h)[None, :]).ravel()
    v = (stats.a0 * c.nodes[:, None] + _shifted_squares(stats.a0, stats.y0_tilde, h)[None, :]).ravel()
    w = np.outer(c.weights, h.weights).ravel()
    return _accel.sigmoid_double_sum(u, w, v, w, stats.shift())


def _ld_value(stats: PredictiveStats, hermite_nodes: int) -> float:
    d = stats.d
    h = hermite_rule(hermite_nodes)
    spread = math.sqrt(2.0 * (d - 1)) * math.hypot(stats.a1, stats.a0)
    drift = (stats.a1 - stats.a0) * (d - 1)
    u = (drift + spread * h.nodes[:, None] + _shifted_squares(stats.a1, stats.y1_tilde, h)[None, :]).ravel()
    wu = np.outer(h.weights, h.weights).ravel()
    v = _shifted_squares(stats.a0, stats.y0_tilde, h)
    return _accel.sigmoid_double_sum(u, wu, v, h.weights, stats.shift())


def _clip01(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def _convergence_check(name, p, p2):
    if abs(p - p2) > CONVERGENCE_TOL:
        warnings.warn(
            f"{name} quadrature not converged: doubling nodes moved {p:.6g} -> {p2:.6g}",
            QuadratureConvergenceWarning,
            stacklevel=3,
        )


def predict_fd(stats: PredictiveStats, config: PredictorConfig | None = None) -> float:
    """Four-dimensional quadrature over two chi-square and two Gaussian axes."""
    config = config or PredictorConfig(Method.FD)
    _require_analytic_dim(stats.d)
    p = _clip01(_fd_value(stats, config.hermite_nodes, config.chisquare_nodes))
    if config.check_convergence:
        p2 = _fd_value(stats, 2 * config.hermite_nodes, 2 * config.chisquare_nodes)
        _convergence_check("FD", p, p2)
    return p


def predict_ld(stats: PredictiveStats, config: PredictorConfig | None = None) -> float:
    """Three-dimensional Gauss-Hermite quadrature with the chi-square axes
    replaced by their central-limit Gaussian approximation."""
    config = config or PredictorConfig(Method.LD)
    _require_analytic_dim(stats.d)
    p = _clip01(_ld_value(stats, config.hermite_nodes))
    if config.check_convergence:
        _convergence_check("LD", p, _ld_value(stats, 2 * config.hermite_nodes))
    return p


def predict_lold(stats: PredictiveStats, config: PredictorConfig | None = None) -> float:
    config = config or PredictorConfig(Method.LOLD)
    lam = lambda10(stats, include_log_e=config.include_log_e)
    if config.lold_form == "step":
        if lam < 0:
            return 1.0
        return 0.0 if lam > 0 else 0.5
    return float(_accel.stable_sigmoid(-stats.d * lam))


def predict_plugin_baseline(summaries: tuple[ClassSummary, ClassSummary], imbalance, x_star, d: int | None = None) -> float:
    """Bayes rule with one isotropic Gaussian per class and ML plug-in estimates.

    The per-coordinate variance of class sigma is ``Sigma^2_sigma / d``.
    """
    s0, s1 = summaries
    d = s0.d if d is None else d
    x = np.asarray(x_star, dtype=np.float64)
    if x.shape != (d,) or s1.d != d:
        raise ValidationError(f"query has shape {x.shape}, expected ({d},)")
    p0, p1 = _check_imbalance(imbalance)
    logs = []
    for s, prior in ((s0, p0), (s1, p1)):
        if not s.sigma_sq > 0:
            raise ZeroVarianceError(f"zero within-class variance in class {s.label}")
        lam_sq = s.sigma_sq / d
        diff = x - s.mean
        logs.append(math.log(prior) - 0.5 * d * math.log(lam_sq) - (diff @ diff) / (2.0 * lam_sq))
    return float(_accel.stable_sigmoid(logs[1] - logs[0]))


def classify(probability: float, threshold: float = 0.5) -> int:
    """Label 1 iff ``probability >= threshold``."""
    if not 0.0 < threshold < 1.0:
        raise ValidationError(f"threshold must lie in (0, 1), got {threshold}")
    return int(probability >= threshold)


@dataclass(frozen=True)
class FittedModel:
    """Everything fitted from a training set that a query needs."""

    summaries: tuple[ClassSummary, ClassSummary]
    posteriors: tuple[ClassPosterior, ClassPosterior]
    imbalance: tuple[float, float]

    @property
    def d(self) -> int:
        return self.summaries[0].d

    def stats(self, x_star) -> PredictiveStats:
        return predictive_statistics(*self.posteriors, self.imbalance, x_star)


def fit_model(train: Dataset, imbalance=None) -> FittedModel:
    """Summaries, MAP hyperparameters and class proportions from ``train``.

    ``imbalance`` overrides the training proportions when given.
    """
    train.require_both_classes()
    summaries = (summarize_class(train, 0), summarize_class(train, 1))
    posteriors = tuple(fit_hyperparameters(s, train.d) for s in summaries)
    imb = train.imbalance() if imbalance is None else _check_imbalance(imbalance)
    return FittedModel(summaries, posteriors, imb)


def predict_proba(model: FittedModel, x_star, config: PredictorConfig) -> float:
    """Class-1 probability of one query under the configured method."""
    if config.method is Method.BASELINE:
        return predict_plugin_baseline(model.summaries, model.imbalance, x_star, model.d)
    stats = model.stats(x_star)
    if config.method is Method.FD:
        return predict_fd(stats, config)
    if config.method is Method.LD:
        return predict_ld(stats, config)
    return predict_lold(stats, config)
