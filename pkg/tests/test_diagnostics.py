import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vvixsv import diagnostics as dg
from vvixsv.mcmc import ChainConfig, run_chain
from vvixsv.model import REFERENCE_P, REFERENCE_Q, REFERENCE_SIGMA_P
from vvixsv.simulate import simulate_dataset

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def test_qq_points_examples():
    theo, samp = dg.qq_points([1.0, -1.0])
    np.testing.assert_allclose(theo, [-0.6744897501960817, 0.6744897501960817])
    np.testing.assert_array_equal(samp, [-1.0, 1.0])
    _, flat = dg.qq_points(np.full(5, 2.0))
    assert np.all(flat == 2.0)
    with pytest.raises(ValueError):
        dg.qq_points([1.0])


def test_qq_normal_sample_near_diagonal():
    z = np.random.default_rng(0).standard_normal(5000)
    theo, samp = dg.qq_points(z)
    inner = slice(50, -50)
    assert np.max(np.abs(theo[inner] - samp[inner])) < 0.1


@settings(max_examples=50, deadline=None)
@given(x=arrays(float, st.integers(2, 60), elements=finite), seed=st.integers(0, 10_000))
def test_qq_shuffle_invariance(x, seed):
    y = np.random.default_rng(seed).permutation(np.sort(x))
    a, b = dg.qq_points(x), dg.qq_points(y)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_summary_stats():
    s = dg.summary_stats(np.tile([1.0, -1.0], 50))
    assert s["mean"] == pytest.approx(0.0)
    assert s["volatility"] == pytest.approx(1.0, abs=0.01)
    const = dg.summary_stats(np.full(10, 3.0))
    assert const["volatility"] == 0.0
    assert np.isnan(const["skewness"]) and np.isnan(const["excess_kurtosis"])
    with pytest.raises(ValueError):
        dg.summary_stats([1.0, 2.0, 3.0])


def test_excess_kurtosis_of_normal_sample():
    z = np.random.default_rng(1).standard_normal(200_000)
    assert dg.summary_stats(z)["excess_kurtosis"] == pytest.approx(0.0, abs=0.05)


def test_predictive_statistics_monotone_steps():
    c = 0.03
    st_ = dg.predictive_statistics(np.arange(20) * c)
    for name in ("maxjump", "minjump", "avgmax10", "avgmin10", "perc0_01", "perc0_99"):
        assert float(getattr(st_, name)) == pytest.approx(c)
    with pytest.raises(ValueError):
        dg.predictive_statistics(np.arange(10.0))


def test_predictive_statistics_stack_matches_rows():
    rng = np.random.default_rng(2)
    paths = np.cumsum(rng.standard_normal((4, 200)) * 0.05, axis=1)
    stacked = dg.predictive_statistics(paths)
    for k in range(4):
        one = dg.predictive_statistics(paths[k])
        for name in dg.PredictiveStatistics.names():
            assert getattr(stacked, name)[k] == pytest.approx(float(getattr(one, name)), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(x=arrays(float, st.integers(11, 80), elements=finite))
def test_percentile_and_extreme_ordering(x):
    s = dg.predictive_statistics(x)
    assert s.perc0_01 <= s.perc0_05 <= s.perc0_95 <= s.perc0_99
    assert s.minjump <= s.avgmin10 <= s.avgmax10 <= s.maxjump
    assert s.minimum <= s.maximum


def test_labels():
    names = dg.PredictiveStatistics.names()
    assert len(names) == 13
    assert dg.PredictiveStatistics.label("perc0_99") == "perc0.99"
    assert dg.PredictiveStatistics.label("maxjump") == "maxjump"


def test_pvalue_tie_rule():
    obs = dg.predictive_statistics(np.arange(20) * 0.01)
    sim = dg.predictive_statistics(np.tile(np.arange(20) * 0.01, (5, 1)))
    assert all(v == 0.0 for v in dg.exceedance_pvalues(sim, obs).values())


def test_pvalue_self_inclusion_is_binary():
    y = np.cumsum(np.random.default_rng(3).standard_normal(100)) * 0.05
    p = dg.exceedance_pvalues(dg.predictive_statistics(y[None, :]), dg.predictive_statistics(y))
    assert all(v in (0.0, 1.0) for v in p.values())


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_pvalue_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    paths = np.cumsum(rng.standard_normal((30, 60)) * 0.05, axis=1)
    obs = dg.predictive_statistics(paths[0] * 1.1)
    a = dg.exceedance_pvalues(dg.predictive_statistics(paths), obs)
    b = dg.exceedance_pvalues(dg.predictive_statistics(paths[rng.permutation(30)]), obs)
    assert a == b


def test_pvalue_study_deterministic(true_params):
    path = simulate_dataset("SVJJ_S", true_params.p, true_params.q, true_params.sigma_P, T=200, seed=1)
    a = dg.pvalue_study("SVJJ_S", true_params, path.y, N=50, seed=2)
    b = dg.pvalue_study("SVJJ_S", true_params, path.y, N=50, seed=2)
    c = dg.pvalue_study("SVJJ_S", [true_params, true_params], path.y, N=50, seed=2)
    assert a == b
    assert set(a) == set(dg.PredictiveStatistics.names())
    assert all(0.0 <= v <= 1.0 for v in c.values())
    with pytest.raises(ValueError):
        dg.pvalue_study("SVJJ_S", true_params, path.y, N=0)


def test_proxy_correlation():
    w = np.linspace(0.1, 1.0, 50)
    assert dg.proxy_correlation(w, 0.2 + 1.3 * w) == pytest.approx(1.0)
    rng = np.random.default_rng(4)
    assert abs(dg.proxy_correlation(rng.standard_normal(5000), rng.standard_normal(5000))) < 0.05
    assert np.isnan(dg.proxy_correlation(np.ones(5), w[:5]))
    with pytest.raises(ValueError):
        dg.proxy_correlation(w, w[:-1])


@pytest.fixture(scope="module")
def short_fits():
    """SVJJ-S and SV fits to the same jump-laden synthetic series."""
    path = simulate_dataset("SVJJ_S", REFERENCE_P, REFERENCE_Q, REFERENCE_SIGMA_P, T=400, seed=31)
    cfg = ChainConfig(iterations=600, burn_in=300, seed=1)
    fits = {v: run_chain(cfg, v, path.y, path.vvix_sq) for v in ("SVJJ_S", "SV")}
    return path, fits


def test_jump_profile(short_fits):
    path, fits = short_fits
    prof = dg.posterior_jump_profile(fits["SVJJ_S"])
    assert len(prof.day) == path.T and prof.day[0] == 2
    assert np.all((prof.probability >= 0) & (prof.probability <= 1))
    sv = dg.posterior_jump_profile(fits["SV"])
    assert np.all(sv.probability == 0) and np.all(sv.mean_jump_y == 0)
    # the largest simulated jump lands in the top decile of probabilities
    big = int(np.argmax(np.abs(path.j_y * path.n)))
    cutoff = np.quantile(prof.probability, 0.9)
    assert prof.probability[big - 2] >= cutoff


def test_sv_needs_larger_shocks(short_fits):
    path, fits = short_fits
    r_s = dg.chain_residuals(fits["SVJJ_S"], path.y)
    r_sv = dg.chain_residuals(fits["SV"], path.y)
    assert np.max(np.abs(r_sv.eps_y)) > np.max(np.abs(r_s.eps_y))
    assert np.max(np.abs(r_sv.eps_omega)) > np.max(np.abs(r_s.eps_omega))
