import os
import subprocess
import sys

import numpy as np
import pytest

from bayes_outcome import _accel

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def test_double_sum_backends_agree():
    rng = np.random.default_rng(0)
    u, v = rng.normal(0, 30, 700), rng.normal(0, 30, 500)
    wu, wv = rng.random(700), rng.random(500)
    wu, wv = wu / wu.sum(), wv / wv.sum()
    for shift in (-800.0, 0.0, 3.5, 900.0):
        a = _accel.sigmoid_double_sum_numba(u, wu, v, wv, shift)
        b = _accel.sigmoid_double_sum_numpy(u, wu, v, wv, shift)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_double_sum_matches_direct_formula():
    u = np.array([0.0, 1.0])
    v = np.array([2.0])
    w = np.array([0.25, 0.75])
    expect = 0.25 / (1 + np.exp(0.0 + 0.5 - 2.0)) + 0.75 / (1 + np.exp(1.0 + 0.5 - 2.0))
    for fn in (_accel.sigmoid_double_sum_numba, _accel.sigmoid_double_sum_numpy):
        assert fn(u, w, v, np.ones(1), 0.5) == pytest.approx(expect, rel=1e-15)


def test_row_sq_norm_backends_agree():
    rng = np.random.default_rng(1)
    z = rng.standard_normal((50, 13))
    off = rng.standard_normal(13)
    np.testing.assert_allclose(_accel.row_sq_norm_numba(off, 0.7, z), _accel.row_sq_norm_numpy(off, 0.7, z), rtol=1e-13)


def test_stable_sigmoid_extremes():
    vals = _accel.stable_sigmoid(np.array([-1e4, -30.0, 0.0, 30.0, 1e4]))
    assert vals[0] == 0.0 and vals[-1] == 1.0 and vals[2] == 0.5
    assert vals[1] == pytest.approx(np.exp(-30) / (1 + np.exp(-30)), rel=1e-14)
    assert isinstance(_accel.stable_sigmoid(2.0), float)


def test_env_flag_selects_numpy_path():
    code = (
        "from bayes_outcome import _accel, fit_model, predict_fd, SimConfig, simulate_dataset;"
        "m = fit_model(simulate_dataset(SimConfig(d=10, seed=1)));"
        "print(_accel.backend(), repr(predict_fd(m.stats(m.posteriors[0].mean))))"
    )
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, BAYES_OUTCOME_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        name, value = res.stdout.split()
        out[name] = float(value)
    assert set(out) == {"numpy", "numba"}
    assert out["numpy"] == pytest.approx(out["numba"], rel=1e-12)
