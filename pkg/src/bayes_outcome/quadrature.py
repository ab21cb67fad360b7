"""Gaussian and chi-square weighted quadrature, and a Monte-Carlo check.

Rules are built with the Golub-Welsch method: the nodes are the
eigenvalues of the Jacobi matrix of the weight's orthonormal polynomials.
Weights are the Christoffel numbers, which equal the squared first
eigenvector components but keep their relative accuracy in the tails.
Both weight functions are probability densities, so weights sum to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, xlogy

from . import _accel
from .data import Dataset
from .exceptions import ComputationError, DimensionError, ValidationError
from .posterior import ClassPosterior, _check_imbalance

DEFAULT_HERMITE_NODES = 40
DEFAULT_CHISQUARE_NODES = 60


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for ``E[f(X)] ~ sum_i w_i f(x_i)``.

    ``kind`` is ``"gauss-standard-normal"`` or ``"gauss-chisquare(k)"``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def expect(self, f) -> float:
        return float(self.weights @ f(self.nodes))


def _christoffel_weights(nodes: np.ndarray, diag: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    """Weights ``1 / sum_k p_k(x)^2`` from the orthonormal recurrence.

    Eigenvector components are only accurate to absolute precision, which
    loses the tiny tail weights; this form is accurate in relative terms.
    The running sum is rescaled to stay in floating-point range.
    """
    n = diag.shape[0]
    p_prev = np.zeros_like(nodes)
    p_cur = np.ones_like(nodes)
    total = np.ones_like(nodes)
    log_scale = np.zeros_like(nodes)
    for k in range(n - 1):
        b_prev = offdiag[k - 1] if k > 0 else 0.0
        p_next = ((nodes - diag[k]) * p_cur - b_prev * p_prev) / offdiag[k]
        p_prev, p_cur = p_cur, p_next
        total += p_cur * p_cur
        big = total > 1e200
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p_prev *= f
            p_cur *= f
            total *= f * f
            log_scale += np.where(big, 200.0 * math.log(10.0), 0.0)
    return np.exp(-(np.log(total) + log_scale))


def _golub_welsch(diag: np.ndarray, offdiag: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if diag.shape[0] == 1:
        return diag.copy(), np.ones(1)
    nodes = eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    weights = _christoffel_weights(nodes, diag, offdiag)
    return nodes, weights / weights.sum()


def _freeze(nodes, weights, kind) -> QuadratureRule:
    nodes = np.array(nodes, dtype=np.float64)
    weights = np.array(weights, dtype=np.float64)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, kind)


@lru_cache(maxsize=64)
def hermite_rule(n: int = DEFAULT_HERMITE_NODES) -> QuadratureRule:
    """Gauss rule for the standard normal density (probabilists' Hermite).

    Exact for polynomials up to degree ``2n - 1``. Nodes and weights are
    symmetrised so that the rule is exactly even.
    """
    if n < 1:
        raise ValidationError("node count must be >= 1")
    k = np.arange(1, n, dtype=np.float64)
    nodes, weights = _golub_welsch(np.zeros(n), np.sqrt(k))
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights /= weights.sum()
    return _freeze(nodes, weights, "gauss-standard-normal")


@lru_cache(maxsize=64)
def chisquare_rule(dof: int, n: int = DEFAULT_CHISQUARE_NODES) -> QuadratureRule:
    """Gauss rule for the chi-square density with ``dof`` degrees of freedom.

    Built from generalised Laguerre polynomials with ``alpha = dof/2 - 1``
    in the variable ``t = Y / 2``. The result is checked against the
    analytic mean before being returned, which guards the very large
    ``alpha`` needed at high dimension.
    """
    if dof < 2:
        raise DimensionError(
            f"dimension below analytic validity: chi-square dof {dof} < 2 (needs d >= 3)"
        )
    if n < 1:
        raise ValidationError("node count must be >= 1")
    alpha = dof / 2.0 - 1.0
    i = np.arange(n, dtype=np.float64)
    diag = 2.0 * i + alpha + 1.0
    k = np.arange(1, n, dtype=np.float64)
    offdiag = np.sqrt(k * (k + alpha))
    t, weights = _golub_welsch(diag, offdiag)
    nodes = 2.0 * t
    mean = float(weights @ nodes)
    if abs(mean - dof) > 1e-9 * dof:
        raise ComputationError(f"chi-square rule failed its moment check (mean {mean} vs {dof})")
    return _freeze(nodes, weights, f"gauss-chisquare({dof})")


def w_log_density(y, d: int):
    """Log density of ``|v|^2`` for a standard normal ``v`` in ``d - 1`` dimensions.

    Returns ``-inf`` for ``y < 0``; vectorised over ``y``.
    """
    if d < 3:
        raise DimensionError(f"dimension below analytic validity: d = {d} < 3")
    k = d - 1
    y = np.asarray(y, dtype=np.float64)
    half = 0.5 * k
    with np.errstate(divide="ignore", invalid="ignore"):
        val = -half * math.log(2.0) - gammaln(half) - 0.5 * y + xlogy(half - 1.0, y)
    val = np.where(y < 0, -np.inf, val)
    return val[()] if val.ndim == 0 else val


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int


def mc_oracle_probability(
    dataset: Dataset,
    posteriors: tuple[ClassPosterior, ClassPosterior],
    imbalance,
    x_star,
    n_samples: int = 1_000_000,
    seed: int = 0,
    block_elements: int = 4_000_000,
) -> McEstimate:
    """Monte-Carlo estimate of the class-1 predictive probability.

    Draws both class means from their Gaussian posteriors (centred on
    ``(s/psi)^2 * sum of class samples`` with spread ``s``) and averages the
    Bayes posterior of class 1 computed from the two isotropic Gaussian
    likelihoods. Nothing from the reduced statistics is used, so this is
    an independent check of the quadrature predictors.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1")
    x = np.asarray(x_star, dtype=np.float64)
    d = dataset.d
    if x.shape != (d,):
        raise ValidationError(f"query has shape {x.shape}, expected ({d},)")
    p0, p1 = _check_imbalance(imbalance)

    offsets, scales, inv2psi, const = [], [], [], math.log(p0) - math.log(p1)
    for label, post in zip((0, 1), posteriors):
        class_sum = dataset.features[dataset.labels == label].sum(axis=0)
        centre = (post.s_hat_sq / post.psi_hat_sq) * class_sum
        offsets.append(centre - x)
        scales.append(math.sqrt(post.s_hat_sq))
        inv2psi.append(0.5 / post.psi_hat_sq)
    # log p(x*|0) - log p(x*|1) without the quadratic parts
    const += -0.5 * d * (math.log(posteriors[0].psi_hat_sq) - math.log(posteriors[1].psi_hat_sq))

    # one stream per class: the draws do not depend on the block size
    rng0, rng1 = (np.random.Generator(np.random.PCG64(c)) for c in np.random.SeedSequence(seed).spawn(2))
    block = max(1, block_elements // max(d, 1))
    count, mean, m2 = 0, 0.0, 0.0
    remaining = n_samples
    while remaining > 0:
        b = min(block, remaining)
        z0 = rng0.standard_normal((b, d))
        z1 = rng1.standard_normal((b, d))
        q0 = _accel.row_sq_norm(offsets[0], scales[0], z0)
        q1 = _accel.row_sq_norm(offsets[1], scales[1], z1)
        log_ratio = const - inv2psi[0] * q0 + inv2psi[1] * q1
        vals = _accel.stable_sigmoid(-log_ratio)
        # merge block moments (Chan et al.)
        bm = float(vals.mean())
        bm2 = float(((vals - bm) ** 2).sum())
        tot = count + b
        delta = bm - mean
        mean += delta * b / tot
        m2 += bm2 + delta * delta * count * b / tot
        count = tot
        remaining -= b
    var = m2 / (count - 1) if count > 1 else 0.0
    return McEstimate(min(max(mean, 0.0), 1.0), math.sqrt(var / count), count)
