"""Daily-frequency jump and co-jump tests on level series.

Jumps are screened with the bipower-variation ratio statistic computed on
``n``-day rolling windows of daily changes.  Co-jumps are screened with the
studentised rolling cross-product of two change series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import gamma
from scipy.stats import norm

# E|Z|^{4/3} for a standard normal Z
MU_43 = 2.0 ** (2.0 / 3.0) * gamma(7.0 / 6.0) / gamma(0.5)
ZT_SCALE = (np.pi / 2.0) ** 2 + np.pi - 5.0
DEFAULT_WINDOW = 22


@dataclass
class RollingJumpStats:
    """Per-day statistics; NaN where the window is incomplete or RV is zero.

    ``t`` indexes the level series, so ``t[k]`` is the day whose change
    ``X[t] - X[t-1]`` closes the window.
    """

    t: np.ndarray
    rv: np.ndarray
    bv: np.ndarray
    rj: np.ndarray
    tp: np.ndarray
    z: np.ndarray
    flagged: np.ndarray

    @property
    def n_flagged(self) -> int:
        return int(self.flagged.sum())

    @property
    def n_defined(self) -> int:
        return int(np.isfinite(self.z).sum())


@dataclass
class CojumpStats:
    t: np.ndarray
    cp: np.ndarray
    z_cp: np.ndarray
    flagged: np.ndarray

    @property
    def n_flagged(self) -> int:
        return int(self.flagged.sum())


def changes(series, log_returns: bool = False) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if log_returns:
        x = np.log(x)
    return np.diff(x)


def critical_value(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return float(norm.ppf(1.0 - alpha / 2.0))


def _window_sum(values: np.ndarray, width: int, total: int) -> np.ndarray:
    """Trailing sums aligned so entry ``k`` ends at ``values[k]``; NaN-padded."""
    out = np.full(total, np.nan)
    if len(values) >= width:
        out[width - 1 :] = sliding_window_view(values, width).sum(axis=1)
    return out


def rolling_stats(
    series, n: int = DEFAULT_WINDOW, alpha: float = 0.05, log_returns: bool = False
) -> RollingJumpStats:
    """Rolling RV, BV, RJ, TP and the ratio z-statistic for every day.

    RV sums ``n + 1`` squared changes and BV/TP sum ``n`` products, exactly as
    in the daily adaptation of the ratio jump statistic.
    """
    x = np.asarray(series, dtype=float)
    if n < 2:
        raise ValueError(f"window n must be >= 2, got {n}")
    if len(x) <= n + 2:
        raise ValueError(f"series length {len(x)} must exceed n + 2 = {n + 2}")
    r = changes(x, log_returns)
    m = len(r)
    a = np.abs(r)

    rv = _window_sum(r * r, n + 1, m)
    bv_terms = np.concatenate([[np.nan], a[1:] * a[:-1]])
    bv = (np.pi / 2.0) * _window_sum(bv_terms, n, m)
    a43 = a ** (4.0 / 3.0)
    tp_terms = np.concatenate([[np.nan, np.nan], a43[2:] * a43[1:-1] * a43[:-2]])
    # n = 2 leaves the quarticity scale undefined
    scale = MU_43**-3 * n * n / (n - 2) if n > 2 else np.nan
    tp = scale * _window_sum(tp_terms, n, m)

    with np.errstate(divide="ignore", invalid="ignore"):
        rj = np.where(rv > 0, (rv - bv) / rv, np.nan)
        ratio = np.where(bv > 0, tp / bv**2, np.inf)
        z = rj / np.sqrt(ZT_SCALE / n * np.maximum(1.0, ratio))
    z[~np.isfinite(z)] = np.nan
    crit = critical_value(alpha)
    flagged = np.abs(z) > crit
    t = np.arange(1, len(x))
    return RollingJumpStats(t=t, rv=rv, bv=bv, rj=rj, tp=tp, z=z, flagged=flagged)


def detect_jumps(series, n: int = DEFAULT_WINDOW, alpha: float = 0.05, log_returns=False):
    """Boolean flags per change-day (``len(series) - 1`` entries)."""
    return rolling_stats(series, n, alpha, log_returns).flagged


def cojump_stats(
    series1, series2, n: int = DEFAULT_WINDOW, alpha: float = 0.05, log_returns=False
) -> CojumpStats:
    x1 = np.asarray(series1, dtype=float)
    x2 = np.asarray(series2, dtype=float)
    if x1.shape != x2.shape:
        raise ValueError("co-jump series must have equal length")
    crit = critical_value(alpha)
    r1 = changes(x1, log_returns)
    r2 = changes(x2, log_returns)
    m = len(r1)
    if m < n:
        raise ValueError(f"series too short for window n = {n}")
    # cp_t defined for t = n..T (1-based change index)
    cp = _window_sum(r1 * r2, n, m)
    valid = cp[n - 1 :]
    mean = valid.mean()
    sd = np.sqrt(np.mean((valid - mean) ** 2))
    if sd > 0:
        z = (cp - mean) / sd
        flagged = np.abs(z) > crit
    else:
        z = np.full(m, np.nan)
        flagged = np.zeros(m, dtype=bool)
    return CojumpStats(t=np.arange(1, len(x1)), cp=cp, z_cp=z, flagged=flagged)


def detect_cojumps(series1, series2, n: int = DEFAULT_WINDOW, alpha: float = 0.05, log_returns=False):
    return cojump_stats(series1, series2, n, alpha, log_returns).flagged


def two_step_test(vix, vvix, n: int = DEFAULT_WINDOW, alpha: float = 0.05, log_returns=False):
    """Jump screen on each index, then the co-jump screen on the pair."""
    s1 = rolling_stats(vix, n, alpha, log_returns)
    s2 = rolling_stats(vvix, n, alpha, log_returns)
    cj = cojump_stats(vix, vvix, n, alpha, log_returns)
    return s1, s2, cj
