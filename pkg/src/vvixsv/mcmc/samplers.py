"""Conditional samplers for one Gibbs sweep.

Each sampler draws one block from its full conditional given everything
else; Metropolis blocks record their acceptances in a :class:`Tuner`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import expit
from scipy.stats import truncnorm

from ..model import ModelVariant
from .priors import Q_BLOCKS, PriorHyper
from .state import (
    ChainData,
    LatentState,
    Params,
    bernoulli_loglik,
    coefficients,
    jump_prob,
    normal_logpdf,
    pre_jump_residuals,
    standardized,
    transition_loglik,
    vvix_loglik,
    vvix_sse,
)


@dataclass
class Tuner:
    """Random-walk scales and acceptance bookkeeping per Metropolis block."""

    steps: dict[str, np.ndarray | float]
    accepted: dict[str, np.ndarray | float] = field(default_factory=dict)
    attempted: dict[str, np.ndarray | float] = field(default_factory=dict)
    total_accepted: dict[str, float] = field(default_factory=dict)
    total_attempted: dict[str, float] = field(default_factory=dict)
    rejected_nonfinite: int = 0
    joint_chol: np.ndarray | None = None

    def record(self, name: str, accepted, attempted=1) -> None:
        self.accepted[name] = self.accepted.get(name, 0) + accepted
        self.attempted[name] = self.attempted.get(name, 0) + attempted
        self.total_accepted[name] = self.total_accepted.get(name, 0.0) + float(np.sum(accepted))
        self.total_attempted[name] = self.total_attempted.get(name, 0.0) + float(np.sum(attempted))

    def adapt(self, target: tuple[float, float]) -> None:
        lo, hi = target
        for name, acc in self.accepted.items():
            if name not in self.steps:
                continue
            att = np.maximum(self.attempted[name], 1)
            rate = np.asarray(acc / att, dtype=float)
            factor = np.where(rate < lo, 0.7, np.where(rate > hi, 1.4, 1.0))
            step = self.steps[name] * factor
            self.steps[name] = step if np.ndim(step) else float(step)
        self.accepted.clear()
        self.attempted.clear()

    def rates(self) -> dict[str, float]:
        return {
            k: self.total_accepted[k] / self.total_attempted[k]
            for k in sorted(self.total_attempted)
            if self.total_attempted[k] > 0
        }

    def reset_totals(self) -> None:
        self.total_accepted.clear()
        self.total_attempted.clear()


# ---------------------------------------------------------------- volatility

def omega_log_target(idx, x, params: Params, state: LatentState, data: ChainData, variant):
    """Unnormalised log full conditional of ``omega[idx]`` evaluated at ``x``.

    ``idx`` must not contain neighbouring days, so every entry only sees
    fixed values in its Markov blanket.
    """
    T = data.T
    p, q = params.p, params.q
    a0, a1, a2, c0, c1 = coefficients(p, q, data.delta)
    dt = data.delta
    rho = p.rho
    one_m = 1.0 - rho * rho
    sig = p.sigma_omega
    om, y, n, jy, jw = state.omega, data.y, state.n, state.j_y, state.j_omega
    out = np.zeros_like(x)

    # transition into day i (needs day i-1 >= 1)
    has_in = idx >= 2
    if np.any(has_in):
        i = idx[has_in]
        prev = om[i - 1]
        sd = np.sqrt(prev * dt)
        C = (y[i] - jy[i] * n[i] - a0 - a1 * y[i - 1] - a2 * prev) / sd
        D = (x[has_in] - jw[i] * n[i] - c0 - c1 * prev) / (sig * sd)
        out[has_in] -= (C * C + D * D - 2.0 * rho * C * D) / (2.0 * one_m)

    # transition out of day i
    s = np.sqrt(x * dt)
    k = idx + 1
    Cn = (y[k] - jy[k] * n[k] - a0 - a1 * y[idx] - a2 * x) / s
    interior = idx <= T - 1
    if np.any(interior):
        i = idx[interior]
        xi = x[interior]
        c_ = Cn[interior]
        Dn = (om[i + 1] - jw[i + 1] * n[i + 1] - c0 - c1 * xi) / (sig * s[interior])
        out[interior] += -np.log(xi) - (c_ * c_ + Dn * Dn - 2.0 * rho * c_ * Dn) / (2.0 * one_m)
    last = ~interior
    if np.any(last):
        out[last] += -0.5 * np.log(x[last]) - 0.5 * Cn[last] ** 2

    # jump indicator on day i+1 depends on omega_i through the intensity
    if variant.state_dependent_intensity and q.lambda1 != 0.0:
        prob = jump_prob(q, x, dt)
        out += np.where(n[k] == 1, np.log(prob), np.log1p(-prob))

    if data.vvix_enabled:
        lo = data.loading(q)
        e = data.vvix_sq[idx] - lo.A - lo.B * x
        out -= e * e / (2.0 * params.sigma_P**2)
    return out


def _omega_update(idx, params, state, data, variant, rng, tuner):
    cur = state.omega[idx]
    step = tuner.steps["omega"][idx]
    prop = cur + step * rng.standard_normal(len(idx))
    u = rng.random(len(idx))
    ok = prop > data.omega_floor
    lt_cur = omega_log_target(idx, cur, params, state, data, variant)
    lt_prop = np.full(len(idx), -np.inf)
    if np.any(ok):
        with np.errstate(all="ignore"):
            lt_prop[ok] = omega_log_target(idx[ok], prop[ok], params, state, data, variant)
    finite = np.isfinite(lt_prop)
    tuner.rejected_nonfinite += int(np.sum(ok & ~finite))
    accept = finite & (np.log(u) < lt_prop - lt_cur)
    state.omega[idx] = np.where(accept, prop, cur)
    acc = np.zeros(data.T + 2)
    att = np.zeros(data.T + 2)
    acc[idx] = accept
    att[idx] = 1.0
    tuner.record("omega", acc, att)
    return accept


def sample_volatility_point(i, params, state, data, variant, rng, tuner) -> float:
    """Random-walk Metropolis update of a single ``omega[i]``, ``1 <= i <= T``."""
    if not 1 <= i <= data.T:
        raise IndexError(f"volatility index {i} outside 1..{data.T}")
    _omega_update(np.array([i]), params, state, data, variant, rng, tuner)
    return float(state.omega[i])


def sample_volatility(params, state, data, variant, rng, tuner) -> None:
    """Update every ``omega[1..T]``: odd days first, then even days."""
    T = data.T
    for start in (1, 2):
        idx = np.arange(start, T + 1, 2)
        if len(idx):
            _omega_update(idx, params, state, data, variant, rng, tuner)


# ---------------------------------------------------------------- jumps

def jump_log_odds(params: Params, state: LatentState, data: ChainData, variant) -> np.ndarray:
    """Posterior log odds of ``n[i] = 1`` for days ``2..T+1``."""
    T = data.T
    p, q = params.p, params.q
    u_y, u_w, prev = pre_jump_residuals(params, state, data)
    sd = np.sqrt(prev * data.delta)
    rho = p.rho
    one_m = 1.0 - rho * rho
    C0 = u_y / sd
    C1 = (u_y - state.j_y[2:]) / sd
    # day T+1: univariate
    ll0 = -0.5 * C0 * C0
    ll1 = -0.5 * C1 * C1
    D0 = u_w / (p.sigma_omega * sd[:-1])
    if variant.has_vol_jumps:
        D1 = (u_w - state.j_omega[2 : T + 1]) / (p.sigma_omega * sd[:-1])
    else:
        D1 = D0
    a, b = C0[:-1], C1[:-1]
    ll0[:-1] = -(a * a + D0 * D0 - 2.0 * rho * a * D0) / (2.0 * one_m)
    ll1[:-1] = -(b * b + D1 * D1 - 2.0 * rho * b * D1) / (2.0 * one_m)
    prob = jump_prob(q, prev, data.delta)
    return ll1 - ll0 + np.log(prob) - np.log1p(-prob)


def sample_jump_indicators(params, state, data, variant, rng) -> None:
    if not variant.has_jumps:
        state.n[:] = 0
        return
    odds = jump_log_odds(params, state, data, variant)
    u = rng.random(data.T)
    state.n[2:] = u < expit(odds)


def sample_jump_indicator(i, params, state, data, variant, rng) -> int:
    """Draw ``n[i]`` alone (``2 <= i <= T+1``)."""
    if not 2 <= i <= data.T + 1:
        raise IndexError(f"jump index {i} outside 2..{data.T + 1}")
    if not variant.has_jumps:
        state.n[i] = 0
        return 0
    odds = jump_log_odds(params, state, data, variant)[i - 2]
    state.n[i] = int(rng.random() < expit(odds))
    return int(state.n[i])


def jump_size_moments(params: Params, state: LatentState, data: ChainData, variant):
    """Conditional (mean, var) of ``j_omega`` then ``j_y`` for jump days.

    Returned arrays cover days ``2..T+1``; the ``j_omega`` moments are only
    meaningful on days ``2..T`` and the ``j_y`` moments use the current
    ``j_omega``.
    """
    T = data.T
    p, q = params.p, params.q
    u_y, u_w, prev = pre_jump_residuals(params, state, data)
    var_y = prev * data.delta
    rho = p.rho
    one_m = 1.0 - rho * rho
    sig = p.sigma_omega

    w_mean = np.full(T, p.mu_omega_JP)
    w_var = np.full(T, p.sigma_omega_J**2)
    if variant.has_vol_jumps and p.sigma_omega_J > 0:
        v = sig * sig * var_y[:-1] * one_m
        prec = 1.0 / v + 1.0 / p.sigma_omega_J**2
        resid = u_w - rho * sig * (u_y[:-1] - state.j_y[2 : T + 1])
        w_var[:-1] = 1.0 / prec
        w_mean[:-1] = (resid / v + p.mu_omega_JP / p.sigma_omega_J**2) / prec
    return w_mean, w_var, var_y, u_y, u_w


def sample_jump_sizes(params, state, data, variant, rng) -> None:
    """Draw ``j_omega`` then ``j_y`` for days ``2..T+1``.

    Jump days use the conjugate normal conditionals; other days are drawn from
    the P jump-size laws.
    """
    T = data.T
    p, q = params.p, params.q
    if not variant.has_jumps:
        state.j_y[:] = 0.0
        state.j_omega[:] = 0.0
        return
    jump = state.n[2:] == 1

    if variant.has_vol_jumps:
        w_mean, w_var, *_ = jump_size_moments(params, state, data, variant)
        prior = p.mu_omega_JP + p.sigma_omega_J * rng.standard_normal(T)
        post = w_mean + np.sqrt(w_var) * rng.standard_normal(T)
        state.j_omega[2:] = np.where(jump, post, prior)
    else:
        rng.standard_normal(T)
        rng.standard_normal(T)
        state.j_omega[:] = 0.0

    u_y, u_w, prev = pre_jump_residuals(params, state, data)
    var_y = prev * data.delta
    rho = p.rho
    one_m = 1.0 - rho * rho
    s2 = q.sigma_y_J**2
    # Y residual conditional on the omega shock; day T+1 has no omega shock
    resid = u_y.copy()
    cond_var = var_y.copy()
    resid[:-1] -= rho / p.sigma_omega * (u_w - state.j_omega[2 : T + 1] * (variant.has_vol_jumps))
    cond_var[:-1] *= one_m
    z = rng.standard_normal(T)
    zp = rng.standard_normal(T)
    if s2 > 0:
        prec = 1.0 / cond_var + 1.0 / s2
        mean = (resid / cond_var + p.mu_y_JP / s2) / prec
        post = mean + z / np.sqrt(prec)
    else:
        post = np.full(T, p.mu_y_JP)
    prior = p.mu_y_JP + q.sigma_y_J * zp
    state.j_y[2:] = np.where(jump, post, prior)


# ---------------------------------------------------------------- P parameters

def _linear_conjugate(target, x, var, prior):
    """Posterior (mean, var) of b in ``target = b*x + N(0, var)``."""
    m0, v0 = prior
    prec = 1.0 / v0 + np.sum(x * x / var)
    num = m0 / v0 + np.sum(x * target / var)
    return num / prec, 1.0 / prec


def _draw_normal(mean, var, rng, lower=None):
    sd = np.sqrt(var)
    if lower is None:
        return float(mean + sd * rng.standard_normal())
    a = (lower - mean) / sd
    return float(truncnorm.rvs(a, np.inf, loc=mean, scale=sd, random_state=rng))


def drift_design(params: Params, state: LatentState, data: ChainData):
    """Pieces of the logVIX and variance regressions used by the drift blocks.

    logVIX, days 2..T+1: ``g = kappa_V*(theta - Y_prev)*dt - varsigma_V*prev*dt
    + noise(var_g)``; on days 2..T the noise is conditioned on the variance
    shock.  Variance, days 2..T: ``h = alpha*dt - kappa_P*prev*dt + noise(var_h)``.
    """
    T = data.T
    p = params.p
    dt = data.delta
    rho = p.rho
    one_m = 1.0 - rho * rho
    C, D, prev = standardized(params, state, data)
    sd = np.sqrt(prev * dt)
    y_prev = data.y[1 : T + 1]
    y_tilde = data.y[2:] - state.j_y[2:] * state.n[2:]
    g = y_tilde - y_prev
    g[:-1] -= rho * D * sd[:-1]
    var_g = prev * dt
    var_g[:-1] *= one_m
    w_tilde = state.omega[2 : T + 1] - state.j_omega[2 : T + 1] * state.n[2 : T + 1]
    h = w_tilde - prev[:-1] - p.sigma_omega * rho * C[:-1] * sd[:-1]
    var_h = p.sigma_omega**2 * one_m * prev[:-1] * dt
    return g, var_g, y_prev, prev, h, var_h


def theta_conditional(params, state, data, priors):
    g, var_g, y_prev, prev, *_ = drift_design(params, state, data)
    p, dt = params.p, data.delta
    target = g + p.kappa_V * y_prev * dt + p.varsigma_V * prev * dt
    return _linear_conjugate(target, np.full_like(g, p.kappa_V * dt), var_g, priors.theta)


def kappa_V_conditional(params, state, data, priors):
    g, var_g, y_prev, prev, *_ = drift_design(params, state, data)
    p, dt = params.p, data.delta
    target = g + p.varsigma_V * prev * dt
    return _linear_conjugate(target, (p.theta - y_prev) * dt, var_g, priors.kappa_V)


def varsigma_V_conditional(params, state, data, priors):
    g, var_g, y_prev, prev, *_ = drift_design(params, state, data)
    p, dt = params.p, data.delta
    target = g - p.kappa_V * (p.theta - y_prev) * dt
    return _linear_conjugate(target, -prev * dt, var_g, priors.varsigma_V)


def kappa_omega_P_conditional(params, state, data, priors):
    *_, prev, h, var_h = drift_design(params, state, data)
    dt = data.delta
    target = h - params.q.alpha_omega * dt
    return _linear_conjugate(target, -prev[:-1] * dt, var_h, priors.kappa_omega_P)


def sample_p_drift_params(params, state, data, priors, rng) -> Params:
    """Sequential conjugate draws of theta, kappa_V, varsigma_V, kappa_omega_P."""
    m, v = theta_conditional(params, state, data, priors)
    params = replace(params, p=replace(params.p, theta=_draw_normal(m, v, rng)))
    m, v = kappa_V_conditional(params, state, data, priors)
    params = replace(params, p=replace(params.p, kappa_V=_draw_normal(m, v, rng, lower=0.0)))
    m, v = varsigma_V_conditional(params, state, data, priors)
    params = replace(params, p=replace(params.p, varsigma_V=_draw_normal(m, v, rng)))
    m, v = kappa_omega_P_conditional(params, state, data, priors)
    params = replace(params, p=replace(params.p, kappa_omega_P=_draw_normal(m, v, rng, lower=0.0)))
    return params


# ---------------------------------------------------------------- jump laws

def jump_mean_conditional(jumps, sigma_J, prior):
    """Normal posterior (mean, var) of a jump-size mean from all draws."""
    m0, v0 = prior
    s2 = sigma_J**2
    prec = len(jumps) / s2 + 1.0 / v0
    return (np.sum(jumps) / s2 + m0 / v0) / prec, 1.0 / prec


def jump_var_conditional(jumps, mean, prior):
    """Inverse-gamma posterior (shape, scale) of a jump-size variance."""
    a, b = prior
    return a + len(jumps) / 2.0, b + 0.5 * float(np.sum((jumps - mean) ** 2))


def draw_invgamma(shape, scale, rng) -> float:
    return float(scale / rng.gamma(shape))


def sample_jump_distribution_params(params, state, data, variant, priors, rng, tuner=None) -> Params:
    """Conjugate updates of the P jump-size laws.

    ``sigma_y_J`` also enters the VVIX loading; when VVIX² is in the
    likelihood its inverse-gamma draw is used as an independence proposal
    and corrected with the VVIX likelihood ratio.
    """
    if not variant.has_jumps:
        return params
    p, q = params.p, params.q
    jy = state.j_y[2:]
    m, v = jump_mean_conditional(jy, q.sigma_y_J, priors.mu_y_JP)
    p = replace(p, mu_y_JP=_draw_normal(m, v, rng))
    if variant.has_vol_jumps:
        jw = state.j_omega[2:]
        m, v = jump_mean_conditional(jw, p.sigma_omega_J, priors.mu_omega_JP)
        p = replace(p, mu_omega_JP=_draw_normal(m, v, rng))
        a, b = jump_var_conditional(jw, p.mu_omega_JP, priors.sigma_omega_J2)
        p = replace(p, sigma_omega_J=float(np.sqrt(draw_invgamma(a, b, rng))))
    params = replace(params, p=p)

    a, b = jump_var_conditional(jy, p.mu_y_JP, priors.sigma_y_J2)
    s2 = draw_invgamma(a, b, rng)
    u = rng.random()
    prop = replace(q, sigma_y_J=float(np.sqrt(s2)))
    if data.vvix_enabled and prop.violation() is None:
        log_ratio = vvix_loglik(prop, params.sigma_P, state, data) - vvix_loglik(
            q, params.sigma_P, state, data
        )
        accept = bool(np.log(u) < log_ratio)
    else:
        accept = prop.violation() is None
    if tuner is not None:
        tuner.record("sigma_y_J", float(accept))
    if accept:
        params = replace(params, q=prop)
    return params


# ---------------------------------------------------------------- Q parameters

def q_block_log_target(name, params, state, data, variant, priors, literal=False) -> float:
    q = params.q
    if q.violation() is not None:
        return -np.inf
    lt = priors.log_normal_prior(name, getattr(q, name))
    lt += vvix_loglik(q, params.sigma_P, state, data)
    if not literal:
        if name == "alpha_omega":
            lt += transition_loglik(params, state, data)
        elif name in ("lambda0", "lambda1"):
            lt += bernoulli_loglik(q, state, data)
    return float(lt)


def active_q_blocks(variant: ModelVariant) -> tuple[str, ...]:
    skip = set()
    if not variant.has_jumps:
        skip |= {"lambda0", "lambda1", "mu_y", "mu_omega"}
    if not variant.state_dependent_intensity:
        skip.add("lambda1")
    if not variant.has_vol_jumps:
        skip.add("mu_omega")
    return tuple(b for b in Q_BLOCKS if b not in skip)


def sample_q_params(params, state, data, variant, priors, rng, tuner, literal=False) -> Params:
    """Block-wise random-walk Metropolis on the pricing-measure parameters."""
    for name in active_q_blocks(variant):
        step = tuner.steps[name]
        prop_val = getattr(params.q, name) + step * rng.standard_normal()
        u = rng.random()
        proposal = replace(params, q=replace(params.q, **{name: prop_val}))
        lt_new = q_block_log_target(name, proposal, state, data, variant, priors, literal)
        accept = False
        if np.isfinite(lt_new):
            lt_old = q_block_log_target(name, params, state, data, variant, priors, literal)
            accept = bool(np.log(u) < lt_new - lt_old)
        elif proposal.q.violation() is None:
            tuner.rejected_nonfinite += 1
        tuner.record(name, float(accept))
        if accept:
            params = proposal
        if name == "mu_y":
            # the target depends on mu_y only through mu_y², so the reflection
            # mu_y -> -mu_y is always accepted under a prior symmetric about 0
            flipped = replace(params, q=replace(params.q, mu_y=-params.q.mu_y))
            lt_f = q_block_log_target(name, flipped, state, data, variant, priors, literal)
            lt_c = q_block_log_target(name, params, state, data, variant, priors, literal)
            if np.log(rng.random()) < lt_f - lt_c:
                params = flipped
    return params


P_JOINT = ("kappa_omega_P", "sigma_omega", "varsigma_V")


def joint_names(variant: ModelVariant, literal=False) -> tuple[str, ...]:
    """Coordinates of the joint move: active Q blocks plus P-side partners."""
    names = active_q_blocks(variant)
    if variant.has_jumps:
        names = names + ("sigma_y_J",)
    return names if literal else names + P_JOINT


def _set_joint(params: Params, names, values) -> Params:
    qv = {k: float(v) for k, v in zip(names, values) if k not in P_JOINT}
    pv = {k: float(v) for k, v in zip(names, values) if k in P_JOINT}
    return replace(params, p=replace(params.p, **pv), q=replace(params.q, **qv))


def get_joint(params: Params, names) -> np.ndarray:
    return np.array(
        [getattr(params.p, k) if k in P_JOINT else getattr(params.q, k) for k in names]
    )


def joint_log_target(names, params, state, data, variant, priors, literal=False) -> float:
    q, p = params.q, params.p
    if q.violation() is not None or p.kappa_omega_P <= 0 or p.sigma_omega <= 0:
        return -np.inf
    lt = sum(
        priors.log_normal_prior(k, v)
        for k, v in zip(names, get_joint(params, names))
        if k != "sigma_y_J"
    )
    lt += vvix_loglik(q, params.sigma_P, state, data)
    if "sigma_y_J" in names:
        if q.sigma_y_J <= 0:
            return -np.inf
        lt += sigma_y_J_log_density(q.sigma_y_J, state, params, priors)
    if not literal:
        lt += transition_loglik(params, state, data)
        if variant.has_jumps:
            lt += bernoulli_loglik(q, state, data)
    return float(lt)


def sigma_y_J_log_density(sig, state, params, priors) -> float:
    """Log prior (inverse gamma on the square, in sigma units) plus j_y density."""
    a, b = priors.sigma_y_J2
    s2 = sig * sig
    lp = -(a + 1.0) * np.log(s2) - b / s2 + np.log(2.0 * sig)
    jy = state.j_y[2:]
    return float(lp + np.sum(normal_logpdf(jy, params.p.mu_y_JP, s2)))


def _carry_mh(block, params, prop, state, data, variant, priors, rng, tuner, literal):
    """Accept/reject ``prop``, mapping the variance path to keep A + B*omega fixed."""
    names = joint_names(variant, literal)
    u = rng.random()
    accept = False
    trial = state
    if not np.isfinite(joint_log_target(names, prop, state, data, variant, priors, literal)):
        tuner.record(block, 0.0)
        return params
    extra = 0.0
    if data.vvix_enabled and not literal:
        T = data.T
        old, new = data.loading(params.q), data.loading(prop.q)
        mapped = (old.A + old.B * state.omega[1 : T + 1] - new.A) / new.B
        if not np.all(mapped > data.omega_floor):
            tuner.record(block, 0.0)
            return params
        trial = state.copy()
        trial.omega[1 : T + 1] = mapped
        extra = T * np.log(old.B / new.B)
    with np.errstate(all="ignore"):
        lt_new = joint_log_target(names, prop, trial, data, variant, priors, literal) + extra
    if np.isfinite(lt_new):
        lt_old = joint_log_target(names, params, state, data, variant, priors, literal)
        accept = bool(np.log(u) < lt_new - lt_old)
    else:
        tuner.rejected_nonfinite += 1
    tuner.record(block, float(accept))
    if not accept:
        return params
    if trial is not state:
        state.omega[:] = trial.omega
    return prop


def sample_joint_q(params, state, data, variant, priors, rng, tuner, chol, literal=False) -> Params:
    """Joint random-walk move over the Q vector and its P-side partners.

    When VVIX² is observed, the variance path is carried along with the
    proposal, ``omega' = (A + B*omega - A')/B'``, so the pricing fit is
    unchanged and the move can slide along the direction where the level
    and scale of ``omega`` trade off against the loading.  The Jacobian of
    that map enters the acceptance ratio.  The move leaves the joint
    posterior invariant; it exists only to speed up mixing.
    """
    names = joint_names(variant, literal)
    z = rng.standard_normal(len(names))
    cur = get_joint(params, names)
    prop = _set_joint(params, names, cur + tuner.steps["q_joint"] * (chol @ z))
    return _carry_mh("q_joint", params, prop, state, data, variant, priors, rng, tuner, literal)


def sample_ridge(params, state, data, variant, priors, rng, tuner, literal=False) -> Params:
    """Shear move along ``kappa_omega_Q - lambda1*mu_omega = const``.

    The loading depends on ``kappa_omega_Q`` and ``mu_omega`` mostly through
    that combination, so the posterior is long and thin in this direction.
    The shear has unit Jacobian.
    """
    if not (variant.has_vol_jumps and variant.state_dependent_intensity):
        return params
    q = params.q
    step = tuner.steps["ridge"] * rng.standard_normal()
    prop = replace(
        params,
        q=replace(q, mu_omega=q.mu_omega + step, kappa_omega_Q=q.kappa_omega_Q + q.lambda1 * step),
    )
    return _carry_mh("ridge", params, prop, state, data, variant, priors, rng, tuner, literal)


# ---------------------------------------------------------------- rho, sigma_omega

def sample_rho_sigma_omega(params, state, data, priors, rng, tuner) -> Params:
    """Joint random-walk Metropolis on ``(rho, sigma_omega)``."""
    p = params.p
    s_rho = tuner.steps["rho"]
    s_sig = tuner.steps["sigma_omega"]
    z = rng.standard_normal(2)
    u = rng.random()
    rho_new = p.rho + s_rho * z[0]
    sig_new = p.sigma_omega + s_sig * z[1]
    accept = False
    if -1.0 < rho_new < 1.0 and sig_new > 0.0:
        prop = replace(params, p=replace(p, rho=rho_new, sigma_omega=sig_new))
        lt_new = transition_loglik(prop, state, data) + priors.log_normal_prior("sigma_omega", sig_new)
        lt_old = transition_loglik(params, state, data) + priors.log_normal_prior(
            "sigma_omega", p.sigma_omega
        )
        if np.isfinite(lt_new):
            accept = bool(np.log(u) < lt_new - lt_old)
        else:
            tuner.rejected_nonfinite += 1
        if accept:
            params = prop
    tuner.record("rho", float(accept))
    tuner.record("sigma_omega", float(accept))
    return params


# ---------------------------------------------------------------- pricing error

def sigma_P_conditional(params, state, data, priors):
    """Inverse-gamma (shape, scale) for sigma_P² over days ``1..T``."""
    a, b = priors.sigma_P2
    return a + data.T / 2.0, b + 0.5 * vvix_sse(params.q, state, data)


def sample_sigma_P(params, state, data, priors, rng) -> Params:
    if data.vvix_enabled:
        a, b = sigma_P_conditional(params, state, data, priors)
    else:
        a, b = priors.sigma_P2
    s2 = draw_invgamma(a, b, rng)
    return replace(params, sigma_P=float(np.sqrt(s2)))
