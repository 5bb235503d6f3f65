"""Residuals, Q-Q data, jump profiles and posterior-predictive checks."""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy import stats

from .model import DEFAULT_DELTA, ModelVariant
from .mcmc.state import Params, coefficients
from .simulate import OMEGA_FLOOR, simulate_paths


@dataclass
class ResidualSeries:
    """Standardised shocks: ``eps_y`` for days 2..T+1, ``eps_omega`` for 2..T."""

    eps_y: np.ndarray
    eps_omega: np.ndarray


def _prev(omega, T, floor):
    return np.maximum(np.asarray(omega, dtype=float)[1 : T + 1], floor)


def vix_residuals(y, omega, jump_y, params: Params, delta=DEFAULT_DELTA, floor=OMEGA_FLOOR):
    """``(Y_i - J_i - a0 - a1*Y_{i-1} - a2*omega_{i-1}) / sqrt(omega_{i-1}*delta)``.

    ``jump_y`` is the realised jump ``j_y * n`` per day (length ``T + 2``) and
    ``omega`` holds the variance on days ``1..T``.
    """
    y = np.asarray(y, dtype=float)
    T = len(y) - 2
    a0, a1, a2, _, _ = coefficients(params.p, params.q, delta)
    prev = _prev(omega, T, floor)
    y_tilde = y[2:] - np.asarray(jump_y, dtype=float)[2 : T + 2]
    return (y_tilde - a0 - a1 * y[1 : T + 1] - a2 * prev) / np.sqrt(prev * delta)


def vol_residuals(omega, jump_omega, params: Params, delta=DEFAULT_DELTA, floor=OMEGA_FLOOR):
    """``(omega_i - J_i - c0 - c1*omega_{i-1}) / (sigma_omega*sqrt(omega_{i-1}*delta))``."""
    omega = np.asarray(omega, dtype=float)
    T = len(np.asarray(jump_omega)) - 2
    _, _, _, c0, c1 = coefficients(params.p, params.q, delta)
    prev = _prev(omega, T, floor)[:-1]
    w_tilde = omega[2 : T + 1] - np.asarray(jump_omega, dtype=float)[2 : T + 1]
    return (w_tilde - c0 - c1 * prev) / (params.p.sigma_omega * np.sqrt(prev * delta))


def chain_residuals(chain, y, delta=None) -> ResidualSeries:
    """Residuals at posterior means of parameters, variance and ``j * n``."""
    delta = chain.config.get("delta", DEFAULT_DELTA) if delta is None else delta
    params = chain.mean_params()
    return ResidualSeries(
        eps_y=vix_residuals(y, chain.omega_mean, chain.jump_y_mean, params, delta),
        eps_omega=vol_residuals(chain.omega_mean, chain.jump_omega_mean, params, delta),
    )


def qq_points(residuals) -> tuple[np.ndarray, np.ndarray]:
    """Standard-normal quantiles at ``(k - 0.5)/n`` against sorted residuals."""
    r = np.sort(np.asarray(residuals, dtype=float))
    n = len(r)
    if n < 2:
        raise ValueError("need at least 2 residuals")
    theory = stats.norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    return theory, r


@dataclass
class JumpProfile:
    day: np.ndarray
    probability: np.ndarray
    mean_jump_y: np.ndarray
    mean_jump_omega: np.ndarray


def posterior_jump_profile(chain) -> JumpProfile:
    """Per-day posterior jump probability and mean of ``j * n`` (days 2..T+1)."""
    if chain.n_draws < 1:
        raise ValueError("chain has no retained draws")
    T = chain.T
    return JumpProfile(
        day=np.arange(2, T + 2),
        probability=chain.jump_prob[2:].copy(),
        mean_jump_y=chain.jump_y_mean[2:].copy(),
        mean_jump_omega=chain.jump_omega_mean[2:].copy(),
    )


def summary_stats(series) -> dict[str, float]:
    """Mean, sample std, skewness and excess kurtosis, min and max.

    Skewness and kurtosis use the bias-corrected sample estimators and are
    NaN (undefined) for a constant series.
    """
    x = np.asarray(series, dtype=float)
    if len(x) < 4:
        raise ValueError("summary statistics need at least 4 observations")
    sd = float(np.std(x, ddof=1))
    if sd > 0:
        skew = float(stats.skew(x, bias=False))
        kurt = float(stats.kurtosis(x, fisher=True, bias=False))
    else:
        skew = kurt = float("nan")
    return {
        "mean": float(np.mean(x)),
        "volatility": sd,
        "skewness": skew,
        "excess_kurtosis": kurt,
        "min": float(np.min(x)),
        "max": float(np.max(x)),
    }


@dataclass
class PredictiveStatistics:
    """Level moments and extremes plus change-based tail statistics.

    Fields may be scalars or arrays (one entry per simulated path).
    """

    stadev: np.ndarray | float
    skewness: np.ndarray | float
    kurtosis: np.ndarray | float
    maximum: np.ndarray | float
    minimum: np.ndarray | float
    maxjump: np.ndarray | float
    minjump: np.ndarray | float
    avgmax10: np.ndarray | float
    avgmin10: np.ndarray | float
    perc0_01: np.ndarray | float
    perc0_05: np.ndarray | float
    perc0_95: np.ndarray | float
    perc0_99: np.ndarray | float

    LABELS = {
        "perc0_01": "perc0.01",
        "perc0_05": "perc0.05",
        "perc0_95": "perc0.95",
        "perc0_99": "perc0.99",
    }

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def label(cls, name: str) -> str:
        return cls.LABELS.get(name, name)

    def as_dict(self) -> dict:
        return asdict(self)


def predictive_statistics(y) -> PredictiveStatistics:
    """The 13 reference statistics of a logVIX series (or a stack of them).

    A 2-D input is treated as one series per row.  Changes are first
    differences; percentiles interpolate linearly between order statistics.
    Kurtosis is the bias-corrected excess kurtosis of the level series.
    """
    y = np.asarray(y, dtype=float)
    if y.shape[-1] < 11:
        raise ValueError("predictive statistics need a series of length >= 11")
    d = np.diff(y, axis=-1)
    ds = np.sort(d, axis=-1)
    pct = np.percentile(d, [1, 5, 95, 99], axis=-1)
    # near-constant paths lose precision in the moments; that is expected
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        skew = stats.skew(y, axis=-1, bias=False)
        kurt = stats.kurtosis(y, axis=-1, fisher=True, bias=False)
    return PredictiveStatistics(
        stadev=np.std(y, axis=-1, ddof=1),
        skewness=skew,
        kurtosis=kurt,
        maximum=np.max(y, axis=-1),
        minimum=np.min(y, axis=-1),
        maxjump=ds[..., -1],
        minjump=ds[..., 0],
        avgmax10=ds[..., -10:].mean(axis=-1),
        avgmin10=ds[..., :10].mean(axis=-1),
        perc0_01=pct[0],
        perc0_05=pct[1],
        perc0_95=pct[2],
        perc0_99=pct[3],
    )


def exceedance_pvalues(sim: PredictiveStatistics, observed: PredictiveStatistics) -> dict[str, float]:
    """Fraction of simulations whose statistic strictly exceeds the observed one."""
    out = {}
    for name in PredictiveStatistics.names():
        s = np.atleast_1d(getattr(sim, name))
        out[name] = float(np.mean(s > getattr(observed, name)))
    return out


def pvalue_study(
    variant,
    params: Params | list[Params],
    y,
    N: int = 1000,
    seed: int = 0,
    omega0: float | None = None,
    delta: float = DEFAULT_DELTA,
) -> dict[str, float]:
    """Posterior-predictive p-values for the 13 statistics of ``y``.

    Paths have the same length as ``y`` and start from ``y[0]``.  ``params``
    is either one parameter set (posterior means) or a list of posterior
    draws, cycled over the ``N`` simulations.  ``omega0`` defaults to the
    stationary mean of the variance.
    """
    from .model import stationary_means

    variant = ModelVariant(variant)
    y = np.asarray(y, dtype=float)
    T = len(y) - 2
    observed = predictive_statistics(y)
    if N < 1:
        raise ValueError("N must be >= 1")
    draws = params if isinstance(params, (list, tuple)) else [params]
    ss = np.random.SeedSequence(seed)
    groups = {}
    for k in range(N):
        groups.setdefault(k % len(draws), []).append(k)
    paths = np.empty((N, T + 2))
    for g, members in groups.items():
        par = draws[g].with_variant(variant)
        w0 = omega0 if omega0 is not None else stationary_means(par.p, par.q)[1]
        child = int(ss.spawn(len(draws))[g].generate_state(1)[0])
        sim, _ = simulate_paths(
            variant, par.p, par.q, y0=y[0], omega0=max(w0, OMEGA_FLOOR), T=T,
            n_paths=len(members), seed=child, delta=delta,
        )
        paths[members] = sim
    return exceedance_pvalues(predictive_statistics(paths), observed)


def proxy_correlation(omega, vvix) -> float:
    """Pearson correlation; NaN when either input is constant."""
    a = np.asarray(omega, dtype=float)
    b = np.asarray(vvix, dtype=float)
    if a.shape != b.shape:
        raise ValueError("inputs must be aligned")
    if np.std(a) == 0 or np.std(b) == 0:
        return float("nan")
    return float(np.corrcoef(a, b)[0, 1])
