"""MAP hyperparameters and the reduced predictive statistics.

The predictive probability of class 1 is an average, over the Gaussian
posterior of both class means, of the logistic function of

    z = a1 |y1 - yt1|^2 - a0 |y0 - yt0|^2 - d log C + log E

with ``y0, y1`` standard normal in d dimensions. Everything downstream
(quadrature, closed form, Monte-Carlo check) consumes the scalars defined
here.

Sign of the class-imbalance term: expanding the likelihood ratio
``p(x*|0) p(0) / (p(x*|1) p(1))`` gives ``+log(p(0)/p(1))`` in the
exponent, so ``log E`` enters with a plus sign. :data:`LOG_E_SIGN` records
this and every predictor uses it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .data import ClassSummary
from .exceptions import ComputationError, DegenerateClassError, ValidationError, ZeroVarianceError

LOG_E_SIGN = +1
LOG_E_CONVENTION = "z = ... - d*log(C) + log(E), E = p(0)/p(1)"


@dataclass(frozen=True)
class ClassPosterior:
    """Fitted hyperparameters and posterior width for one class mean."""

    label: int
    psi_hat_sq: float
    alpha_hat: float
    s_hat_sq: float
    n: int
    mean: np.ndarray

    @property
    def d(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class PredictiveStats:
    a0: float
    a1: float
    y0_tilde: float
    y1_tilde: float
    log_c: float
    log_e: float
    d: int

    def swapped(self) -> "PredictiveStats":
        """Same query with the roles of the two classes exchanged."""
        return replace(
            self,
            a0=self.a1,
            a1=self.a0,
            y0_tilde=self.y1_tilde,
            y1_tilde=self.y0_tilde,
            log_c=-self.log_c,
            log_e=-self.log_e,
        )

    def shift(self) -> float:
        """Constant part of the exponent, ``-d log C + log E``."""
        return -self.d * self.log_c + LOG_E_SIGN * self.log_e


def fit_hyperparameters(summary: ClassSummary, d: int | None = None) -> ClassPosterior:
    """MAP hyperparameters ``alpha = 0`` and ``psi^2 = N Sigma^2 / ((N - 1) d)``."""
    d = summary.d if d is None else d
    if d != summary.d:
        raise ValidationError(f"dimension {d} does not match summary dimension {summary.d}")
    if summary.n < 2:
        raise DegenerateClassError(
            f"degenerate class size: class {summary.label} has {summary.n} sample(s), need >= 2"
        )
    if not summary.sigma_sq > 0:
        raise ZeroVarianceError(f"zero within-class variance in class {summary.label}")
    alpha = 0.0
    psi_sq = summary.n * summary.sigma_sq / ((summary.n - 1) * d)
    s_sq = 1.0 / (alpha + summary.n / psi_sq)
    return ClassPosterior(summary.label, psi_sq, alpha, s_sq, summary.n, summary.mean)


def _check_imbalance(imbalance) -> tuple[float, float]:
    p0, p1 = (float(v) for v in imbalance)
    if not (p0 > 0 and p1 > 0) or abs(p0 + p1 - 1.0) > 1e-9:
        raise ValidationError(f"class proportions must be positive and sum to 1, got {imbalance}")
    return p0, p1


def _y_tilde(post: ClassPosterior, x_star: np.ndarray) -> np.ndarray:
    s = math.sqrt(post.s_hat_sq)
    class_sum = post.n * post.mean
    yt = x_star / s - (s / post.psi_hat_sq) * class_sum
    if post.alpha_hat == 0.0:
        simple = (x_star - post.mean) / s
        scale = (np.linalg.norm(x_star) + np.linalg.norm(post.mean)) / s + 1.0
        if np.linalg.norm(yt - simple) > 1e-8 * scale:
            raise ComputationError("centred-query identity failed; inconsistent posterior")
    return yt


def predictive_statistics(post0: ClassPosterior, post1: ClassPosterior, imbalance, x_star) -> PredictiveStats:
    """Reduce a query point to the scalars feeding every predictor."""
    x = np.asarray(x_star, dtype=np.float64)
    if post0.d != post1.d:
        raise ValidationError("class posteriors have different dimensions")
    if x.shape != (post0.d,):
        raise ValidationError(f"query has shape {x.shape}, expected ({post0.d},)")
    p0, p1 = _check_imbalance(imbalance)
    a0 = 0.5 * post0.s_hat_sq / post0.psi_hat_sq
    a1 = 0.5 * post1.s_hat_sq / post1.psi_hat_sq
    return PredictiveStats(
        a0=a0,
        a1=a1,
        y0_tilde=float(np.linalg.norm(_y_tilde(post0, x))),
        y1_tilde=float(np.linalg.norm(_y_tilde(post1, x))),
        log_c=0.5 * (math.log(post0.psi_hat_sq) - math.log(post1.psi_hat_sq)),
        log_e=math.log(p0) - math.log(p1),
        d=post0.d,
    )


def lambda10(stats: PredictiveStats, include_log_e: bool = False) -> float:
    """Leading-order log-odds rate; class 1 is favoured when negative.

    ``include_log_e`` adds the sub-leading ``log E / d`` term, which the
    leading-order formula drops.
    """
    d = stats.d
    lam = (
        stats.a1
        - stats.a0
        - stats.log_c
        + stats.a1 * stats.y1_tilde**2 / d
        - stats.a0 * stats.y0_tilde**2 / d
    )
    if include_log_e:
        lam += LOG_E_SIGN * stats.log_e / d
    return lam
