"""Time the numba kernels against their numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py``. Both paths are imported
directly, so the ``BAYES_OUTCOME_DISABLE_NUMBA`` flag does not matter here.
"""
import time

import numpy as np

from bayes_outcome import _accel, fit_model, simulate_dataset, SimConfig
from bayes_outcome.quadrature import chisquare_rule, hermite_rule


def best_of(fn, repeats=5):
    fn()  # warm-up / JIT compile
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def fd_grids(d=10, nh=40, nc=60):
    model = fit_model(simulate_dataset(SimConfig(d=d, seed=1)))
    st = model.stats(np.full(d, 0.1))
    h, c = hermite_rule(nh), chisquare_rule(d - 1, nc)
    u = (st.a1 * c.nodes[:, None] + st.a1 * (h.nodes - st.y1_tilde)[None, :] ** 2).ravel()
    v = (st.a0 * c.nodes[:, None] + st.a0 * (h.nodes - st.y0_tilde)[None, :] ** 2).ravel()
    w = np.outer(c.weights, h.weights).ravel()
    return u, w, v, w, st.shift()


def main():
    rows = []
    args = fd_grids()
    for name, fn in (("numba", _accel.sigmoid_double_sum_numba), ("numpy", _accel.sigmoid_double_sum_numpy)):
        t, val = best_of(lambda: fn(*args))
        rows.append(("sigmoid_double_sum (FD, 2400x2400)", name, t, float(val)))

    rng = np.random.default_rng(0)
    z = rng.standard_normal((40_000, 100))
    off = rng.standard_normal(100)
    for name, fn in (("numba", _accel.row_sq_norm_numba), ("numpy", _accel.row_sq_norm_numpy)):
        t, val = best_of(lambda: fn(off, 0.3, z))
        rows.append(("row_sq_norm (40000x100)", name, t, float(val.sum())))

    for kernel, name, t, val in rows:
        print(f"{kernel:<38} {name:<6} {t * 1e3:9.2f} ms   checksum={val:.15g}")


if __name__ == "__main__":
    main()
