import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from bayes_outcome import (
    Dataset,
    DimensionError,
    Method,
    PredictorConfig,
    QuadratureConvergenceWarning,
    SimConfig,
    ValidationError,
    ZeroVarianceError,
    classify,
    fit_model,
    lambda10,
    predict_fd,
    predict_ld,
    predict_lold,
    predict_plugin_baseline,
    predict_proba,
    simulate_dataset,
    summarize_class,
)
from bayes_outcome.posterior import PredictiveStats

FD = PredictorConfig(Method.FD)
LD = PredictorConfig(Method.LD)

stats_strategy = st.builds(
    PredictiveStats,
    a0=st.floats(0.005, 0.3),
    a1=st.floats(0.005, 0.3),
    y0_tilde=st.floats(0, 40),
    y1_tilde=st.floats(0, 40),
    log_c=st.floats(-0.3, 0.3),
    log_e=st.floats(-1.5, 1.5),
    d=st.integers(3, 60),
)


@pytest.mark.parametrize("predict", [predict_fd, predict_ld])
@pytest.mark.parametrize("d", [3, 10, 100])
def test_symmetric_stats_give_half(predict, d):
    s = PredictiveStats(0.05, 0.05, 4.0, 4.0, 0.0, 0.0, d)
    assert predict(s) == pytest.approx(0.5, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(stats_strategy)
def test_label_swap_complement(s):
    for predict in (predict_fd, predict_ld):
        p, q = predict(s), predict(s.swapped())
        assert 0.0 <= p <= 1.0
        assert p + q == pytest.approx(1.0, abs=1e-10)
    assert predict_lold(s) + predict_lold(s.swapped()) == pytest.approx(1.0, abs=1e-15)


def test_fd_tiny_matches_frozen_oracle(tiny):
    # frozen from mc_oracle_probability with 1e7 samples: 0.0314893 +/- 2.84e-5
    p = predict_fd(fit_model(tiny).stats(np.zeros(3)))
    assert abs(p - 0.0314893017) <= 3 * 2.8357e-5


def test_ld_tracks_fd_at_d100(reference_d100):
    model = fit_model(reference_d100)
    rng = np.random.default_rng(1)
    for k in range(8):
        x = rng.normal(0.0, 0.24 if k % 2 else 0.28, 100)
        s = model.stats(x)
        assert abs(predict_ld(s) - predict_fd(s)) <= 0.02


def test_quadrature_rejects_low_dimension():
    s = PredictiveStats(0.1, 0.1, 1.0, 1.0, 0.0, 0.0, 2)
    for predict in (predict_fd, predict_ld):
        with pytest.raises(DimensionError, match="below analytic validity"):
            predict(s)
    assert 0 < predict_lold(s) < 1


def test_lold_hand_value(tiny):
    s = fit_model(tiny).stats(np.zeros(3))
    assert predict_lold(s) == pytest.approx(1 / (1 + math.exp(6)), abs=1e-12)
    assert predict_lold(s) == pytest.approx(0.002473, abs=5e-7)


def test_lold_midpoint_and_step():
    zero = PredictiveStats(0.1, 0.1, 3.0, 3.0, 0.0, 0.4, 5)
    assert lambda10(zero) == 0.0
    assert predict_lold(zero) == 0.5
    neg = PredictiveStats(0.25, 0.25, 0.0, 0.0, 2.0, 0.0, 3)
    assert lambda10(neg) == pytest.approx(-2.0)
    step = PredictorConfig(Method.LOLD, lold_form="step")
    assert predict_lold(neg, step) == 1.0
    assert predict_lold(neg.swapped(), step) == 0.0
    assert predict_lold(PredictiveStats(1.0, 1.0, 0.0, 0.0, 1e4, 0.0, 10_000)) == 1.0
    assert predict_lold(PredictiveStats(1.0, 1.0, 0.0, 0.0, -1e4, 0.0, 10_000)) == 0.0


def test_lold_include_log_e_shifts_towards_majority():
    s = PredictiveStats(0.01, 0.01, 10.0, 10.0, 0.0, math.log(3.0), 10)
    plain = predict_lold(s)
    with_e = predict_lold(s, PredictorConfig(Method.LOLD, include_log_e=True))
    assert plain == 0.5 and with_e == pytest.approx(0.25)


def _baseline_oracle(ds, x, imbalance):
    out = []
    for label, prior in zip((0, 1), imbalance):
        pts = ds.features[ds.labels == label]
        mean = pts.mean(axis=0)
        var = ((pts - mean) ** 2).sum() / (len(pts) * ds.d)
        out.append(math.log(prior) + sps.multivariate_normal(mean, var * np.eye(ds.d)).logpdf(x))
    return 1.0 / (1.0 + math.exp(out[0] - out[1]))


@pytest.mark.parametrize("seed", range(5))
def test_baseline_matches_multivariate_normal(seed):
    ds = simulate_dataset(SimConfig(n0=7, n1=12, d=6, mu1=0.1, seed=seed))
    x = np.random.default_rng(seed).normal(0, 0.26, 6)
    m = fit_model(ds)
    p = predict_plugin_baseline(m.summaries, m.imbalance, x, 6)
    assert p == pytest.approx(_baseline_oracle(ds, x, m.imbalance), rel=1e-9)


def test_baseline_symmetric_and_closer_class():
    ds = Dataset([[0, 0], [2, 0], [0, 0], [2, 0]], [0, 0, 1, 1])
    m = fit_model(ds)
    assert predict_plugin_baseline(m.summaries, (0.5, 0.5), [5.0, 1.0]) == pytest.approx(0.5)
    ds = Dataset([[0, 0], [2, 0], [0, 3], [2, 3]], [0, 0, 1, 1])
    m = fit_model(ds)
    assert predict_plugin_baseline(m.summaries, (0.5, 0.5), m.summaries[1].mean) > 0.5


def test_baseline_zero_variance():
    ds = Dataset([[1.0], [1.0], [0.0], [2.0]], [0, 0, 1, 1])
    summaries = (summarize_class(ds, 0), summarize_class(ds, 1))
    with pytest.raises(ZeroVarianceError):
        predict_plugin_baseline(summaries, (0.5, 0.5), [0.0])


@pytest.mark.parametrize("p, t, label", [(0.7, 0.5, 1), (0.5, 0.5, 1), (0.49, 0.5, 0), (0.0, 0.1, 0), (1.0, 0.9, 1)])
def test_classify(p, t, label):
    assert classify(p, t) == label


@pytest.mark.parametrize("t", [0.0, 1.0, -0.2])
def test_classify_rejects_threshold(t):
    with pytest.raises(ValidationError):
        classify(0.5, t)


def test_config_validation():
    with pytest.raises(ValidationError):
        PredictorConfig(Method.FD, hermite_nodes=1)
    with pytest.raises(ValidationError):
        PredictorConfig("nope")
    with pytest.raises(ValidationError):
        PredictorConfig(lold_form="ramp")
    assert PredictorConfig("LD").method is Method.LD


def test_convergence_warning_surfaces():
    s = PredictiveStats(0.25, 0.25, 6.0, 3.0, 0.0, 0.0, 3)
    with pytest.warns(QuadratureConvergenceWarning):
        predict_fd(s, PredictorConfig(Method.FD, hermite_nodes=2, chisquare_nodes=2, check_convergence=True))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        predict_fd(s, PredictorConfig(Method.FD, check_convergence=True))
        predict_ld(s, PredictorConfig(Method.LD, check_convergence=True))


@pytest.mark.parametrize("d, method", [(3, Method.FD), (10, Method.FD), (10, Method.LD), (100, Method.LD)])
def test_node_doubling_converged(d, method):
    ds = simulate_dataset(SimConfig(d=d, seed=40 + d))
    model = fit_model(ds.without(0))
    base = PredictorConfig(method)
    fine = PredictorConfig(method, hermite_nodes=80, chisquare_nodes=120)
    for x in ds.features[::10]:
        s = model.stats(x)
        assert abs(predict_proba(model, x, base) - predict_proba(model, x, fine)) < 1e-4, s


def test_ld_sign_agrees_with_lambda_at_large_d():
    ds = simulate_dataset(SimConfig(d=100, seed=77))
    queries = simulate_dataset(SimConfig(d=100, seed=78))
    model = fit_model(ds)
    agree = []
    for x in queries.features:
        s = model.stats(x)
        agree.append(np.sign(predict_ld(s) - 0.5) == np.sign(-lambda10(s)))
    assert np.mean(agree) >= 0.95


def test_predict_proba_dispatch(tiny):
    m = fit_model(tiny)
    x = np.array([0.5, 1.0, 0.0])
    s = m.stats(x)
    assert predict_proba(m, x, PredictorConfig(Method.LOLD)) == predict_lold(s)
    assert predict_proba(m, x, FD) == predict_fd(s)
    assert predict_proba(m, x, LD) == predict_ld(s)
    assert predict_proba(m, x, PredictorConfig(Method.BASELINE)) == predict_plugin_baseline(m.summaries, m.imbalance, x)


def test_class_prior_sign_matches_oracle_on_unbalanced_data():
    from dataclasses import replace
    from bayes_outcome import mc_oracle_probability

    ds = simulate_dataset(SimConfig(n0=15, n1=45, d=5, seed=3))
    m = fit_model(ds)
    x = ds.features[0]
    st = m.stats(x)
    est = mc_oracle_probability(ds, m.posteriors, m.imbalance, x, n_samples=200_000, seed=1)
    assert abs(predict_fd(st) - est.mean) <= 4 * est.std_error
    assert abs(predict_fd(replace(st, log_e=-st.log_e)) - est.mean) > 100 * est.std_error
