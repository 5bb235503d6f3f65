from dataclasses import replace

import numpy as np
import pytest

from vvixsv.mcmc import ChainConfig, ChainDivergenceError, run_chain
from vvixsv.mcmc import chain as chain_mod
from vvixsv.mcmc.chain import PARAM_NAMES, learned_chol
from vvixsv.simulate import simulate_dataset


@pytest.fixture(scope="module")
def small_data():
    from vvixsv.model import REFERENCE_P, REFERENCE_Q, REFERENCE_SIGMA_P

    path = simulate_dataset("SVJJ_S", REFERENCE_P, REFERENCE_Q, REFERENCE_SIGMA_P, T=120, seed=21)
    return path.y, path.vvix_sq


def run(data, variant="SVJJ_S", **kw):
    cfg = ChainConfig(**{"iterations": 60, "burn_in": 30, "adapt_window": 10, **kw})
    return run_chain(cfg, variant, *data)


def test_single_retained_draw(small_data):
    out = run(small_data, iterations=31, burn_in=30)
    assert out.n_draws == 1
    assert set(out.draws) == set(PARAM_NAMES)
    assert out.posterior_std()["theta"] == 0.0


def test_draw_count_with_thinning(small_data):
    out = run(small_data, iterations=61, burn_in=30, thin=4)
    assert out.n_draws == ChainConfig(iterations=61, burn_in=30, thin=4).n_retained == 8


def test_deterministic(small_data):
    a = run(small_data, seed=3)
    b = run(small_data, seed=3)
    c = run(small_data, seed=4)
    for k in PARAM_NAMES:
        np.testing.assert_array_equal(a.draws[k], b.draws[k])
    np.testing.assert_array_equal(a.omega_mean, b.omega_mean)
    assert not np.array_equal(a.draws["theta"], c.draws["theta"])


def test_summaries(small_data):
    out = run(small_data)
    T = out.T
    assert T == 120
    assert np.all(out.omega_mean[1 : T + 1] > 0) and np.all(out.omega_std[1 : T + 1] >= 0)
    assert np.all((out.jump_prob >= 0) & (out.jump_prob <= 1))
    assert all(0.0 <= r <= 1.0 for r in out.acceptance.values())
    lo, hi = out.interval("kappa_V")
    assert lo <= out.posterior_mean()["kappa_V"] <= hi
    pooled = out.pooled_residuals()
    assert set(pooled) == {"eps_y", "eps_omega"}
    assert all(np.isfinite(v).all() for v in pooled.values())
    assert out.mean_params().q.violation() is None


def test_sv_variant_has_no_jumps(small_data):
    out = run(small_data, variant="SV")
    for k in ("lambda0", "lambda1", "mu_y", "mu_omega", "sigma_y_J", "mu_y_JP", "mu_omega_JP", "sigma_omega_J"):
        assert np.all(out.draws[k] == 0.0), k
    assert np.all(out.jump_prob == 0) and np.all(out.jump_y_mean == 0)


def test_svj_closure(small_data):
    out = run(small_data, variant="SVJ_C")
    for k in ("lambda1", "mu_omega", "mu_omega_JP", "sigma_omega_J"):
        assert np.all(out.draws[k] == 0.0), k
    assert np.all(out.jump_omega_mean == 0)
    assert np.all(out.draws["lambda0"] > 0)


def test_svjj_c_has_constant_intensity(small_data):
    out = run(small_data, variant="SVJJ_C")
    assert np.all(out.draws["lambda1"] == 0.0)


def test_vvix_disabled_runs(small_data):
    y, _ = small_data
    out = run((y, np.full_like(y, np.nan)), vvix_enabled=False)
    assert np.all(np.isfinite(out.omega_mean[1:-1]))


def test_divergence_is_reported(small_data, monkeypatch):
    def broken(params, *args, **kw):
        return replace(params, sigma_P=float("nan"))

    monkeypatch.setattr(chain_mod, "sample_sigma_P", broken)
    with pytest.raises(ChainDivergenceError) as err:
        run(small_data)
    assert err.value.sweep == 0 and "sigma_P" in err.value.detail


def test_config_validation():
    with pytest.raises(ValueError):
        ChainConfig(iterations=10, burn_in=10)
    with pytest.raises(ValueError):
        ChainConfig(thin=0)
    with pytest.raises(ValueError):
        ChainConfig(target_accept=(0.6, 0.4))


def test_learned_chol_reproduces_covariance():
    rng = np.random.default_rng(0)
    cov = np.array([[1.0, 0.8], [0.8, 2.0]])
    x = rng.multivariate_normal([0, 0], cov, size=20000)
    L = learned_chol(x) / (2.38 / np.sqrt(2))
    np.testing.assert_allclose(L @ L.T, cov, rtol=0.05)
