import numpy as np
import pytest

from vvixsv.diagnostics import vix_residuals, vol_residuals
from vvixsv.model import ModelVariant, affine_loadings, stationary_means
from vvixsv.simulate import observe_vvix, simulate_dataset, simulate_path, simulate_paths


def test_shapes_and_start(true_params):
    p, q = true_params.p, true_params.q
    path = simulate_path("SVJJ_S", p, q, y0=3.0, omega0=0.5, T=50, seed=1)
    assert path.T == 50
    assert path.y.shape == (52,) and path.omega.shape == (51,)
    assert path.y[0] == 3.0 and path.omega[0] == 0.5
    assert np.all(path.n[:2] == 0) and np.all(path.j_y[:2] == 0)
    assert np.all(path.omega > 0)


def test_defaults_to_stationary_means(true_params):
    p, q = true_params.p, true_params.q
    path = simulate_path("SVJJ_S", p, q, T=10, seed=0)
    y_bar, w_bar = stationary_means(p, q)
    assert path.y[0] == y_bar and path.omega[0] == w_bar


def test_deterministic(true_params):
    a = simulate_dataset("SVJJ_S", true_params.p, true_params.q, true_params.sigma_P, T=200, seed=7)
    b = simulate_dataset("SVJJ_S", true_params.p, true_params.q, true_params.sigma_P, T=200, seed=7)
    c = simulate_dataset("SVJJ_S", true_params.p, true_params.q, true_params.sigma_P, T=200, seed=8)
    np.testing.assert_array_equal(a.y, b.y)
    np.testing.assert_array_equal(a.vvix_sq, b.vvix_sq)
    assert not np.array_equal(a.y, c.y)


def test_residuals_recover_shocks(true_params):
    """Inverting the recursion with the true latent path returns the shocks."""
    path = simulate_path("SVJJ_S", true_params.p, true_params.q, T=400, seed=3)
    T = path.T
    omega = np.full(T + 2, np.nan)
    omega[: T + 1] = path.omega
    ey = vix_residuals(path.y, omega, path.j_y * path.n, true_params)
    ew = vol_residuals(omega, path.j_omega * path.n, true_params)
    np.testing.assert_allclose(ey, path.eps_y[2:], atol=1e-10)
    np.testing.assert_allclose(ew, path.eps_omega[2 : T + 1], atol=1e-10)


def test_paths_use_independent_streams(true_params):
    p, q = true_params.p, true_params.q
    y3, w3 = simulate_paths("SVJJ_S", p, q, 3.0, 0.6, T=100, n_paths=3, seed=11)
    y5, w5 = simulate_paths("SVJJ_S", p, q, 3.0, 0.6, T=100, n_paths=5, seed=11)
    np.testing.assert_array_equal(y3, y5[:3])
    np.testing.assert_array_equal(w3, w5[:3])
    assert not np.array_equal(y5[0], y5[1])


def test_sv_variant_has_no_jumps(true_params):
    path = simulate_path(ModelVariant.SV, true_params.p, true_params.q, T=300, seed=2)
    assert path.n.sum() == 0 and np.all(path.j_y == 0) and np.all(path.j_omega == 0)


def test_svj_has_no_vol_jumps(true_params):
    path = simulate_path("SVJ_C", true_params.p, true_params.q, T=500, seed=2)
    assert path.n.sum() > 0
    assert np.all(path.j_omega == 0)


def test_noise_free_vvix_is_affine(true_params):
    path = simulate_path("SVJJ_S", true_params.p, true_params.q, T=30, seed=0)
    v = observe_vvix(path, true_params.q, sigma_P=0.0)
    lo = affine_loadings(true_params.q)
    np.testing.assert_allclose(v[1:31], lo.A + lo.B * path.omega[1:31])
    assert np.isnan(v[0]) and np.isnan(v[31])


def test_bad_inputs(true_params):
    with pytest.raises(ValueError):
        simulate_path("SVJJ_S", true_params.p, true_params.q, omega0=-1.0, T=10)
    with pytest.raises(ValueError):
        simulate_path("SVJJ_S", true_params.p, true_params.q, T=1)
    path = simulate_path("SVJJ_S", true_params.p, true_params.q, T=10)
    with pytest.raises(ValueError):
        observe_vvix(path, true_params.q, sigma_P=-0.1)


def test_jump_frequency_matches_intensity(true_params):
    """Empirical jump rate is close to the mean of (lambda0 + lambda1*omega)*dt."""
    p, q = true_params.p, true_params.q
    path = simulate_path("SVJJ_S", p, q, T=20000, seed=5)
    prob = (q.lambda0 + q.lambda1 * path.omega[1:-1]) * path.delta
    expected = prob.sum()
    assert abs(path.n[2:-1].sum() - expected) < 4 * np.sqrt(expected)
