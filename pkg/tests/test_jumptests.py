import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from vvixsv.jumptests import (
    MU_43,
    cojump_stats,
    critical_value,
    detect_cojumps,
    detect_jumps,
    rolling_stats,
    two_step_test,
)


def brownian(seed, length=2000, sd=0.05):
    rng = np.random.default_rng(seed)
    return 3.0 + np.cumsum(sd * rng.standard_normal(length))


def test_constant_returns():
    s = rolling_stats(np.arange(8.0), n=2)
    k = 4  # any day with a complete window
    assert s.rv[k] == pytest.approx(3.0)
    assert s.bv[k] == pytest.approx(np.pi)
    assert s.rj[k] == pytest.approx((3 - np.pi) / 3)
    assert s.rj[k] == pytest.approx(-0.0472, abs=5e-5)
    # windows that are not yet complete are undefined
    assert np.isnan(s.rv[0]) and np.isnan(s.rv[1])


def test_zero_returns_are_undefined():
    s = rolling_stats(np.ones(30), n=5)
    assert np.all((s.rv == 0) | np.isnan(s.rv))
    assert np.all(np.isnan(s.rj)) and not s.flagged.any()


def test_mu43_quadrature():
    val, _ = integrate.quad(lambda z: abs(z) ** (4 / 3) * stats.norm.pdf(z), -np.inf, np.inf)
    assert MU_43 == pytest.approx(val, rel=1e-10)
    assert MU_43 == pytest.approx(0.83091, abs=1e-4)


def test_alpha_near_one_flags_all_defined():
    s = rolling_stats(brownian(0, 300), n=22, alpha=0.999999)
    defined = np.isfinite(s.z) & (s.z != 0)
    assert s.flagged[defined].all()
    assert not s.flagged[~np.isfinite(s.z)].any()


def test_critical_value():
    assert critical_value(0.05) == pytest.approx(1.959964, abs=1e-6)
    with pytest.raises(ValueError):
        critical_value(1.0)


def test_input_validation():
    with pytest.raises(ValueError):
        rolling_stats(np.arange(5.0), n=1)
    with pytest.raises(ValueError):
        rolling_stats(np.arange(5.0), n=22)
    with pytest.raises(ValueError):
        cojump_stats(np.arange(40.0), np.arange(41.0))


def test_injected_jump_is_flagged():
    x = brownian(1, 400)
    x[200:] += 8 * 0.05
    flags = detect_jumps(x, n=22)
    # the change on day 200 closes windows ending at days 200..221
    assert flags[199:221].any()


@settings(max_examples=25, deadline=None)
@given(c=st.floats(0.01, 100.0), seed=st.integers(0, 1000))
def test_scale_invariance(c, seed):
    x = brownian(seed, 200)
    y = brownian(seed + 1, 200)
    a, b = rolling_stats(x), rolling_stats(c * x)
    np.testing.assert_allclose(b.rj, a.rj, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(b.z, a.z, rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(cojump_stats(c * x, y).z_cp, cojump_stats(x, y).z_cp, rtol=1e-8, atol=1e-10)


def test_time_shift_equivariance():
    x = brownian(4, 300)
    a = rolling_stats(x)
    b = rolling_stats(np.concatenate([np.full(10, x[0]), x]))
    # prepended zero changes occupy the first 10 slots; later windows line up
    np.testing.assert_allclose(b.z[10 + 30 :], a.z[30:], rtol=1e-10)


def test_null_z_is_roughly_normal():
    # RV has one more term than BV, which biases z upward by about
    # 1/(n+1) / sqrt(0.609/n); a long window keeps that bias small
    n = 100
    z = []
    for seed in range(20):
        s = rolling_stats(brownian(seed, 3000), n=n)
        z.extend(s.z[n + 1 :: n + 1])
    z = np.asarray(z)[:500]
    assert len(z) == 500
    assert stats.kstest(z, "norm").statistic < 0.08


def test_cojump_identical_series():
    x = brownian(2, 300)
    cj = cojump_stats(x, x, n=22)
    valid = cj.cp[21:]
    r = np.diff(x)
    direct = np.array([np.sum(r[t - 21 : t + 1] ** 2) for t in range(21, len(r))])
    np.testing.assert_allclose(valid, direct, rtol=1e-12)
    assert np.all(valid > 0)
    assert np.nanmean(cj.z_cp[21:]) == pytest.approx(0.0, abs=1e-10)


def test_cojump_calibration():
    rates = []
    for seed in range(40):
        x, y = brownian(seed, 1000), brownian(seed + 500, 1000)
        f = detect_cojumps(x, y, n=22)
        rates.append(f[21:].mean())
    assert 0.025 <= np.mean(rates) <= 0.1


def test_common_jump_flagged():
    x, y = brownian(6, 500), brownian(7, 500)
    x[250:] += 0.6
    y[250:] += 0.6
    assert detect_cojumps(x, y, n=22)[249:271].any()


def test_two_step():
    x, y = brownian(8, 300), brownian(9, 300)
    s1, s2, cj = two_step_test(x, y)
    assert len(s1.flagged) == len(s2.flagged) == len(cj.flagged) == 299
