"""Latent state, parameter bundle and the log-density pieces shared by samplers.

Index convention: every per-day array has length ``T + 2`` and is indexed by
the day ``i``.  logVIX ``y`` is observed on ``0..T+1``; the variance
``omega`` is latent on ``1..T``; jump indicators and sizes live on
``2..T+1``; VVIX² enters on ``1..T``.  Unused slots hold NaN or zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..model import (
    DEFAULT_DELTA,
    DEFAULT_TAU,
    AffineLoading,
    ModelVariant,
    PParams,
    QParams,
    affine_loadings,
    apply_variant,
)

OMEGA_FLOOR = 1e-8
PROB_CLAMP = 1e-12
LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class Params:
    p: PParams
    q: QParams
    sigma_P: float

    def with_variant(self, variant: ModelVariant) -> "Params":
        p, q = apply_variant(variant, self.p, self.q)
        if p is self.p and q is self.q:
            return self
        return replace(self, p=p, q=q)

    def as_dict(self) -> dict[str, float]:
        out = {}
        out.update(vars(self.p))
        out.update(vars(self.q))
        out["sigma_P"] = self.sigma_P
        out["varsigma_omega"] = (self.p.kappa_omega_P - self.q.kappa_omega_Q) / self.p.sigma_omega
        return out


@dataclass
class LatentState:
    omega: np.ndarray
    n: np.ndarray
    j_y: np.ndarray
    j_omega: np.ndarray

    @property
    def T(self) -> int:
        return len(self.omega) - 2

    def copy(self) -> "LatentState":
        return LatentState(self.omega.copy(), self.n.copy(), self.j_y.copy(), self.j_omega.copy())

    def check(self, variant: ModelVariant) -> None:
        T = self.T
        if not np.all(self.omega[1 : T + 1] > 0):
            raise ValueError("omega must stay positive")
        if not set(np.unique(self.n)).issubset({0, 1}):
            raise ValueError("jump indicators must be 0/1")
        if not variant.has_vol_jumps and np.any(self.j_omega != 0):
            raise ValueError(f"{variant.value} carries no volatility jumps")
        if not variant.has_jumps and np.any(self.n != 0):
            raise ValueError("SV carries no jumps")


@dataclass
class ChainData:
    """Observations handed to the sampler (``y``, ``vvix_sq`` of length T+2)."""

    y: np.ndarray
    vvix_sq: np.ndarray
    delta: float = DEFAULT_DELTA
    tau: float = DEFAULT_TAU
    vvix_enabled: bool = True
    omega_floor: float = OMEGA_FLOOR
    _loading_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.vvix_sq = np.asarray(self.vvix_sq, dtype=float)
        if self.y.shape != self.vvix_sq.shape:
            raise ValueError("y and vvix_sq must have equal length")
        if len(self.y) < 4:
            raise ValueError("need at least 4 observations (T >= 2)")
        T = self.T
        if not np.all(np.isfinite(self.y)):
            raise ValueError("y contains non-finite values")
        if self.vvix_enabled and not np.all(np.isfinite(self.vvix_sq[1 : T + 1])):
            raise ValueError("vvix_sq must be finite on days 1..T")

    @property
    def T(self) -> int:
        return len(self.y) - 2

    def loading(self, q: QParams) -> AffineLoading:
        lo = self._loading_cache.get(q)
        if lo is None:
            if len(self._loading_cache) > 64:
                self._loading_cache.clear()
            lo = affine_loadings(q, self.tau)
            self._loading_cache[q] = lo
        return lo


def coefficients(p: PParams, q: QParams, delta: float):
    """Discrete-time drift coefficients ``(a0, a1, a2, c0, c1)``."""
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    return (
        p.kappa_V * p.theta * delta,
        1.0 - p.kappa_V * delta,
        -p.varsigma_V * delta,
        q.alpha_omega * delta,
        1.0 - p.kappa_omega_P * delta,
    )


def jump_prob(q: QParams, omega_prev: np.ndarray, delta: float) -> np.ndarray:
    return np.clip((q.lambda0 + q.lambda1 * omega_prev) * delta, PROB_CLAMP, 1.0 - PROB_CLAMP)


def pre_jump_residuals(params: Params, state: LatentState, data: ChainData):
    """Drift residuals before removing jumps.

    Returns ``(u_y, u_w, prev)`` where ``u_y[k]`` belongs to day ``k + 2``
    (``T`` entries), ``u_w`` to days ``2..T`` and ``prev = omega[1..T]``.
    """
    T = data.T
    a0, a1, a2, c0, c1 = coefficients(params.p, params.q, data.delta)
    prev = state.omega[1 : T + 1]
    y = data.y
    u_y = y[2:] - a0 - a1 * y[1 : T + 1] - a2 * prev
    u_w = state.omega[2 : T + 1] - c0 - c1 * prev[:-1]
    return u_y, u_w, prev


def standardized(params: Params, state: LatentState, data: ChainData):
    """Jump-adjusted standardised shocks ``C`` (days 2..T+1) and ``D`` (2..T)."""
    T = data.T
    u_y, u_w, prev = pre_jump_residuals(params, state, data)
    sd = np.sqrt(prev * data.delta)
    C = (u_y - state.j_y[2:] * state.n[2:]) / sd
    D = (u_w - state.j_omega[2 : T + 1] * state.n[2 : T + 1]) / (params.p.sigma_omega * sd[:-1])
    return C, D, prev


def transition_loglik(params: Params, state: LatentState, data: ChainData) -> float:
    """Log density of all jump-adjusted daily transitions.

    Days ``2..T`` contribute a bivariate normal in (Y, omega); day ``T+1``
    contributes the univariate logVIX term.
    """
    C, D, prev = standardized(params, state, data)
    rho = params.p.rho
    one_m = 1.0 - rho * rho
    Cb = C[:-1]
    quad = (Cb * Cb + D * D - 2.0 * rho * Cb * D) / one_m
    var = prev * data.delta
    ll = -np.sum(quad) / 2.0
    ll -= np.sum(np.log(var[:-1])) + len(D) * (LOG_2PI + np.log(params.p.sigma_omega) + 0.5 * np.log(one_m))
    ll += -0.5 * (LOG_2PI + np.log(var[-1]) + C[-1] ** 2)
    return float(ll)


def bernoulli_loglik(q: QParams, state: LatentState, data: ChainData) -> float:
    T = data.T
    prob = jump_prob(q, state.omega[1 : T + 1], data.delta)
    n = state.n[2:]
    return float(np.sum(np.where(n == 1, np.log(prob), np.log1p(-prob))))


def vvix_sse(q: QParams, state: LatentState, data: ChainData) -> float:
    T = data.T
    lo = data.loading(q)
    e = data.vvix_sq[1 : T + 1] - lo.A - lo.B * state.omega[1 : T + 1]
    return float(e @ e)


def vvix_loglik(q: QParams, sigma_P: float, state: LatentState, data: ChainData) -> float:
    if not data.vvix_enabled:
        return 0.0
    T = data.T
    s2 = sigma_P * sigma_P
    return -0.5 * (T * (LOG_2PI + np.log(s2)) + vvix_sse(q, state, data) / s2)


def normal_logpdf(x, mean, var):
    return -0.5 * (LOG_2PI + np.log(var) + (x - mean) ** 2 / var)


def jump_size_loglik(params: Params, state: LatentState, variant: ModelVariant) -> float:
    """Log density of all jump-size draws under the P jump laws."""
    ll = 0.0
    if variant.has_jumps:
        ll += float(np.sum(normal_logpdf(state.j_y[2:], params.p.mu_y_JP, params.q.sigma_y_J**2)))
    if variant.has_vol_jumps:
        ll += float(
            np.sum(normal_logpdf(state.j_omega[2:], params.p.mu_omega_JP, params.p.sigma_omega_J**2))
        )
    return ll


def complete_loglik(params: Params, state: LatentState, data: ChainData, variant: ModelVariant) -> float:
    """Joint log density of data and latent variables given parameters."""
    ll = transition_loglik(params, state, data) + vvix_loglik(params.q, params.sigma_P, state, data)
    if variant.has_jumps:
        ll += bernoulli_loglik(params.q, state, data)
        ll += jump_size_loglik(params, state, variant)
    return ll
