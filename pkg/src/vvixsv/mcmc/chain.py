"""Gibbs sweep, chain driver and the chain output container."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..model import ModelVariant, affine_loadings
from .priors import ChainConfig, PriorHyper, default_priors
from .samplers import (
    Tuner,
    sample_jump_distribution_params,
    sample_jump_indicators,
    get_joint,
    joint_names,
    sample_joint_q,
    sample_jump_sizes,
    sample_p_drift_params,
    sample_q_params,
    sample_rho_sigma_omega,
    sample_ridge,
    sample_sigma_P,
    sample_volatility,
)
from .state import ChainData, LatentState, Params, standardized

log = logging.getLogger(__name__)

PARAM_NAMES = (
    "kappa_V",
    "varsigma_V",
    "theta",
    "kappa_omega_P",
    "mu_y_JP",
    "mu_omega_JP",
    "sigma_omega_J",
    "rho",
    "sigma_omega",
    "alpha_omega",
    "kappa_omega_Q",
    "lambda0",
    "lambda1",
    "mu_y",
    "mu_omega",
    "sigma_y_J",
    "sigma_P",
    "varsigma_omega",
)


class ChainDivergenceError(RuntimeError):
    """Raised when a sweep leaves the state or parameters non-finite."""

    def __init__(self, sweep: int, detail: dict):
        self.sweep = sweep
        self.detail = detail
        super().__init__(f"chain diverged at sweep {sweep}: {detail}")


@dataclass
class ChainOutput:
    """Retained draws plus per-day posterior summaries.

    Per-day arrays have length ``T + 2`` and follow the usual day indexing;
    ``jump_y_mean``/``jump_omega_mean`` are posterior means of ``j * n``.
    """

    variant: ModelVariant
    draws: dict[str, np.ndarray]
    omega_mean: np.ndarray
    omega_std: np.ndarray
    jump_prob: np.ndarray
    jump_y_mean: np.ndarray
    jump_omega_mean: np.ndarray
    acceptance: dict[str, float]
    seed: int
    config: dict
    priors: dict = field(default_factory=dict)
    rejected_nonfinite: int = 0
    residual_moments: dict = field(default_factory=dict)

    @property
    def n_draws(self) -> int:
        return len(next(iter(self.draws.values())))

    @property
    def T(self) -> int:
        return len(self.omega_mean) - 2

    def posterior_mean(self) -> dict[str, float]:
        return {k: float(np.mean(v)) for k, v in self.draws.items()}

    def posterior_std(self) -> dict[str, float]:
        return {k: float(np.std(v, ddof=1)) if len(v) > 1 else 0.0 for k, v in self.draws.items()}

    def interval(self, name: str, level: float = 0.95) -> tuple[float, float]:
        lo = (1.0 - level) / 2.0
        return tuple(float(x) for x in np.quantile(self.draws[name], [lo, 1.0 - lo]))

    def pooled_residuals(self) -> dict[str, tuple[float, float]]:
        """(mean, std) of the realised shocks pooled over days and draws."""
        out = {}
        for key, (m1, m2) in self.residual_moments.items():
            m1 = np.asarray(m1, dtype=float)
            m2 = np.asarray(m2, dtype=float)
            mean = float(m1.mean())
            out[key] = (mean, float(np.sqrt(max(m2.mean() - mean * mean, 0.0))))
        return out

    def mean_params(self) -> Params:
        """Posterior-mean parameters, projected back onto the variant."""
        from ..model import PParams, QParams

        m = self.posterior_mean()
        p = PParams(**{k: m[k] for k in PParams.__dataclass_fields__})
        q = QParams(**{k: m[k] for k in QParams.__dataclass_fields__})
        return Params(p=p, q=q, sigma_P=m["sigma_P"]).with_variant(self.variant)

    def draw_params(self, k: int) -> Params:
        from ..model import PParams, QParams

        p = PParams(**{f: float(self.draws[f][k]) for f in PParams.__dataclass_fields__})
        q = QParams(**{f: float(self.draws[f][k]) for f in QParams.__dataclass_fields__})
        return Params(p=p, q=q, sigma_P=float(self.draws["sigma_P"][k]))

    def mean_state(self) -> LatentState:
        """Plug-in latent state: posterior mean omega, jump terms ``E[j*n]``."""
        n = np.zeros(len(self.omega_mean), dtype=np.int8)
        n[2:] = 1
        return LatentState(
            omega=self.omega_mean.copy(),
            n=n,
            j_y=self.jump_y_mean.copy(),
            j_omega=self.jump_omega_mean.copy(),
        )


def initial_omega(data: ChainData, params: Params, window: int = 22) -> np.ndarray:
    """Warm start by inverting the VVIX² loading, else a rolling variance of Y."""
    T = data.T
    om = np.full(T + 2, np.nan)
    floor = max(data.omega_floor, 1e-6)
    if data.vvix_enabled:
        lo = affine_loadings(params.q, data.tau)
        om[1 : T + 1] = (data.vvix_sq[1 : T + 1] - lo.A) / lo.B
    else:
        dy = np.diff(data.y)
        sq = np.concatenate([[dy[0] ** 2], dy * dy])
        kernel = np.ones(window) / window
        padded = np.concatenate([np.full(window - 1, np.mean(sq)), sq])
        om[:] = np.convolve(padded, kernel, mode="valid")[: T + 2] / data.delta
    good = om[1 : T + 1]
    good[~np.isfinite(good)] = floor
    om[1 : T + 1] = np.maximum(good, floor)
    om[0] = om[T + 1] = np.nan
    return om


def initial_state(data: ChainData, params: Params, variant: ModelVariant) -> LatentState:
    T = data.T
    omega = initial_omega(data, params)
    j_y = np.zeros(T + 2)
    j_omega = np.zeros(T + 2)
    if variant.has_jumps:
        j_y[2:] = params.p.mu_y_JP
    if variant.has_vol_jumps:
        j_omega[2:] = params.p.mu_omega_JP
    return LatentState(omega=omega, n=np.zeros(T + 2, dtype=np.int8), j_y=j_y, j_omega=j_omega)


def make_tuner(priors: PriorHyper, state: LatentState, names) -> Tuner:
    steps = {k: float(v) for k, v in priors.steps.items() if k != "omega"}
    base = np.nan_to_num(state.omega, nan=1.0)
    steps["omega"] = priors.steps["omega"] * base
    steps.setdefault("q_joint", 1.0)
    steps.setdefault("ridge", 0.5)
    chol = np.diag([priors.steps.get(k, 0.2) for k in names]) / np.sqrt(len(names))
    return Tuner(steps=steps, joint_chol=chol)


def learned_chol(history: np.ndarray) -> np.ndarray:
    """Scaled Cholesky factor of the empirical covariance of ``history``."""
    d = history.shape[1]
    cov = np.atleast_2d(np.cov(history, rowvar=False))
    scale = np.sqrt(np.diag(cov)).mean() + 1e-12
    cov = cov + 1e-6 * scale**2 * np.eye(d)
    return np.linalg.cholesky(cov) * (2.38 / np.sqrt(d))


def gibbs_sweep(state, params, data, variant, priors, rng, tuner, literal_q_target=False):
    """One pass: volatility, jump times, jump sizes, then parameter blocks."""
    variant = ModelVariant(variant)
    sample_volatility(params, state, data, variant, rng, tuner)
    sample_jump_indicators(params, state, data, variant, rng)
    sample_jump_sizes(params, state, data, variant, rng)
    params = sample_p_drift_params(params, state, data, priors, rng).with_variant(variant)
    params = sample_jump_distribution_params(
        params, state, data, variant, priors, rng, tuner
    ).with_variant(variant)
    params = sample_rho_sigma_omega(params, state, data, priors, rng, tuner).with_variant(variant)
    params = sample_q_params(
        params, state, data, variant, priors, rng, tuner, literal_q_target
    ).with_variant(variant)
    if tuner.joint_chol is not None:
        params = sample_joint_q(
            params, state, data, variant, priors, rng, tuner, tuner.joint_chol, literal_q_target
        ).with_variant(variant)
    params = sample_ridge(params, state, data, variant, priors, rng, tuner, literal_q_target)
    params = sample_sigma_P(params, state, data, priors, rng)
    return state, params


def _divergence(state: LatentState, params: Params) -> dict | None:
    T = state.T
    bad = {k: v for k, v in params.as_dict().items() if not np.isfinite(v)}
    if not np.all(np.isfinite(state.omega[1 : T + 1])):
        bad["omega"] = "non-finite"
    if not (np.all(np.isfinite(state.j_y)) and np.all(np.isfinite(state.j_omega))):
        bad["jumps"] = "non-finite"
    return bad or None


def run_chain(
    config: ChainConfig,
    variant: ModelVariant | str,
    y,
    vvix_sq,
    priors: PriorHyper | None = None,
    init: Params | None = None,
) -> ChainOutput:
    """Run ``config.iterations`` sweeps and summarise the retained draws.

    Proposal scales adapt every ``adapt_window`` sweeps during burn-in and
    stay fixed afterwards; reported acceptance rates cover retained sweeps.
    """
    variant = ModelVariant(variant)
    data = ChainData(
        y=y,
        vvix_sq=vvix_sq,
        delta=config.delta,
        tau=config.tau,
        vvix_enabled=config.vvix_enabled,
        omega_floor=config.omega_floor,
    )
    if priors is None:
        priors = default_priors(data.y, config.delta)
    params = (init or priors.initial_params()).with_variant(variant)
    state = initial_state(data, params, variant)
    names = joint_names(variant, config.literal_q_target)
    tuner = make_tuner(priors, state, names)
    history = np.empty((config.burn_in, len(names)))
    rng = np.random.Generator(np.random.PCG64(config.seed))

    T = data.T
    n_keep = config.n_retained
    draws = {k: np.empty(n_keep) for k in PARAM_NAMES}
    s_om = np.zeros(T + 2)
    s_om2 = np.zeros(T + 2)
    s_n = np.zeros(T + 2)
    s_jy = np.zeros(T + 2)
    s_jw = np.zeros(T + 2)
    s_ey = np.zeros((2, T))
    s_ew = np.zeros((2, T - 1))
    k = 0
    for g in range(config.iterations):
        state, params = gibbs_sweep(
            state, params, data, variant, priors, rng, tuner, config.literal_q_target
        )
        bad = _divergence(state, params)
        if bad:
            raise ChainDivergenceError(g, bad)
        if g < config.burn_in:
            history[g] = get_joint(params, names)
            if (g + 1) % config.adapt_window == 0:
                tuner.adapt(config.target_accept)
                if g + 1 >= 4 * config.adapt_window:
                    tuner.joint_chol = learned_chol(history[(g + 1) // 2 : g + 1])
            if g + 1 == config.burn_in:
                tuner.accepted.clear()
                tuner.attempted.clear()
                tuner.reset_totals()
                tuner.rejected_nonfinite = 0
            continue
        if (g - config.burn_in) % config.thin:
            continue
        values = params.as_dict()
        for name in PARAM_NAMES:
            draws[name][k] = values[name]
        s_om += state.omega
        s_om2 += state.omega**2
        s_n += state.n
        s_jy += state.j_y * state.n
        s_jw += state.j_omega * state.n
        C, D, _ = standardized(params, state, data)
        s_ey += (C, C * C)
        s_ew += (D, D * D)
        k += 1
    assert k == n_keep

    mean = s_om / n_keep
    var = np.maximum(s_om2 / n_keep - mean**2, 0.0)
    rates = tuner.rates()
    if "omega" in rates:
        rates["omega"] = float(rates["omega"])
    log.info("chain finished: %d draws, acceptance %s", n_keep, rates)
    return ChainOutput(
        variant=variant,
        draws=draws,
        omega_mean=mean,
        omega_std=np.sqrt(var),
        jump_prob=s_n / n_keep,
        jump_y_mean=s_jy / n_keep,
        jump_omega_mean=s_jw / n_keep,
        acceptance=rates,
        seed=config.seed,
        config=config.as_dict(),
        priors=priors.as_dict(),
        rejected_nonfinite=tuner.rejected_nonfinite,
        residual_moments={"eps_y": tuple(s_ey / n_keep), "eps_omega": tuple(s_ew / n_keep)},
    )
