"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``BAYES_OUTCOME_DISABLE_NUMBA=1`` to force the numpy path. Both paths
are always importable (``*_numba`` / ``*_numpy``) so they can be compared
directly; the unsuffixed names dispatch on :data:`USE_NUMBA`.
"""
from __future__ import annotations

import math
import os

import numpy as np

_FLAG = "BAYES_OUTCOME_DISABLE_NUMBA"

try:
    import numba as nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get(_FLAG, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)

# rows of the outer grid handled per block on the numpy path
_NUMPY_BLOCK = 256


def stable_sigmoid(t):
    """Logistic function ``1 / (1 + exp(-t))`` without overflow.

    Works elementwise on arrays and on scalars.
    """
    t = np.asarray(t, dtype=np.float64)
    e = np.exp(-np.abs(t))
    out = np.where(t >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return out[()] if out.ndim == 0 else out


def _sigmoid_double_sum_py(u, wu, v, wv, shift):
    total = 0.0
    for i in range(u.shape[0]):
        c = u[i] + shift
        row = 0.0
        for j in range(v.shape[0]):
            # compiled exp overflows to inf, giving a term of exactly 0
            row += wv[j] / (1.0 + math.exp(c - v[j]))
        total += wu[i] * row
    return total


def _row_sq_norm_py(offset, scale, z):
    out = np.empty(z.shape[0])
    for b in range(z.shape[0]):
        acc = 0.0
        for k in range(z.shape[1]):
            r = offset[k] + scale * z[b, k]
            acc += r * r
        out[b] = acc
    return out


def sigmoid_double_sum_numpy(u, wu, v, wv, shift):
    """``sum_ij wu[i] wv[j] sigmoid(v[j] - u[i] - shift)`` on the numpy path."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    v = np.ascontiguousarray(v, dtype=np.float64)
    wu = np.ascontiguousarray(wu, dtype=np.float64)
    wv = np.ascontiguousarray(wv, dtype=np.float64)
    total = 0.0
    for start in range(0, u.shape[0], _NUMPY_BLOCK):
        ub = u[start:start + _NUMPY_BLOCK]
        s = stable_sigmoid(v[None, :] - ub[:, None] - shift)
        total += float(wu[start:start + _NUMPY_BLOCK] @ (s @ wv))
    return total


def row_sq_norm_numpy(offset, scale, z):
    """Squared norms ``|offset + scale * z[b]|**2`` for every row of ``z``."""
    r = offset[None, :] + scale * z
    return np.einsum("ij,ij->i", r, r)


if HAVE_NUMBA:
    sigmoid_double_sum_numba = nb.njit(cache=True, nogil=True)(_sigmoid_double_sum_py)
    _row_sq_norm_jit = nb.njit(cache=True, nogil=True)(_row_sq_norm_py)

    def row_sq_norm_numba(offset, scale, z):
        return _row_sq_norm_jit(
            np.ascontiguousarray(offset, dtype=np.float64),
            float(scale),
            np.ascontiguousarray(z, dtype=np.float64),
        )
else:  # pragma: no cover
    sigmoid_double_sum_numba = sigmoid_double_sum_numpy
    row_sq_norm_numba = row_sq_norm_numpy


def sigmoid_double_sum(u, wu, v, wv, shift):
    """Weighted double sum of the logistic of ``v[j] - u[i] - shift``.

    This is the tensor-product quadrature core shared by the finite- and
    large-dimension predictors.
    """
    if USE_NUMBA:
        return float(
            sigmoid_double_sum_numba(
                np.ascontiguousarray(u, dtype=np.float64),
                np.ascontiguousarray(wu, dtype=np.float64),
                np.ascontiguousarray(v, dtype=np.float64),
                np.ascontiguousarray(wv, dtype=np.float64),
                float(shift),
            )
        )
    return sigmoid_double_sum_numpy(u, wu, v, wv, shift)


def row_sq_norm(offset, scale, z):
    if USE_NUMBA:
        return row_sq_norm_numba(offset, scale, z)
    return row_sq_norm_numpy(offset, scale, z)


def backend() -> str:
    """Name of the active kernel backend."""
    return "numba" if USE_NUMBA else "numpy"
