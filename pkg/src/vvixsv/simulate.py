"""Euler simulation of the P dynamics and noisy VVIX² observations."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .model import (
    DEFAULT_DELTA,
    DEFAULT_TAU,
    ModelVariant,
    PParams,
    QParams,
    affine_loadings,
    apply_variant,
    stationary_means,
)

log = logging.getLogger(__name__)

OMEGA_FLOOR = 1e-8


@dataclass
class SimulatedPath:
    """One simulated trajectory on the day grid ``i = 0..T+1``.

    ``y`` has ``T+2`` entries, ``omega`` has ``T+1`` (days ``0..T``).  Jump
    arrays have length ``T+2``; entries 0 and 1 are unused (zero).  ``vvix_sq``
    is NaN outside days ``1..T``.  ``eps_y``/``eps_omega`` keep the raw shocks
    so residuals can be checked against them.
    """

    y: np.ndarray
    omega: np.ndarray
    n: np.ndarray
    j_y: np.ndarray
    j_omega: np.ndarray
    vvix_sq: np.ndarray
    delta: float
    seed: int | None
    eps_y: np.ndarray = field(repr=False, default=None)
    eps_omega: np.ndarray = field(repr=False, default=None)
    clamped_steps: int = 0

    @property
    def T(self) -> int:
        return len(self.y) - 2


def _draw_shocks(rng: np.random.Generator, size: int) -> np.ndarray:
    # fixed draw order keeps every path reproducible from its own stream
    return np.stack(
        [
            rng.standard_normal(size),
            rng.standard_normal(size),
            rng.random(size),
            rng.standard_normal(size),
            rng.standard_normal(size),
        ]
    )


def _euler(variant, p, q, y0, omega0, T, delta, shocks, omega_floor):
    """Vectorised Euler recursion over paths; ``shocks`` is (5, N, T+2)."""
    z1, z2, u, zjy, zjw = shocks
    N = z1.shape[0]
    y = np.empty((N, T + 2))
    om = np.empty((N, T + 1))
    n = np.zeros((N, T + 2), dtype=np.int8)
    jy = np.zeros((N, T + 2))
    jw = np.zeros((N, T + 2))
    y[:, 0] = y0
    om[:, 0] = max(omega0, omega_floor)
    rho = p.rho
    eps_w = rho * z1 + np.sqrt(1.0 - rho * rho) * z2
    if variant.has_jumps:
        jy[:, 2:] = p.mu_y_JP + q.sigma_y_J * zjy[:, 2:]
    if variant.has_vol_jumps:
        jw[:, 2:] = p.mu_omega_JP + p.sigma_omega_J * zjw[:, 2:]
    clamped = 0
    sd = np.sqrt(delta)
    for i in range(1, T + 2):
        prev = om[:, i - 1]
        vol = np.sqrt(prev) * sd
        if i >= 2 and variant.has_jumps:
            prob = (q.lambda0 + q.lambda1 * prev) * delta
            over = prob > 1.0
            if over.any():
                clamped += int(over.sum())
            n[:, i] = u[:, i] < np.minimum(prob, 1.0)
        y[:, i] = (
            y[:, i - 1]
            + (p.kappa_V * p.theta - p.kappa_V * y[:, i - 1] - p.varsigma_V * prev) * delta
            + vol * z1[:, i]
            + jy[:, i] * n[:, i]
        )
        if i <= T:
            nxt = (
                prev
                + (q.alpha_omega - p.kappa_omega_P * prev) * delta
                + p.sigma_omega * vol * eps_w[:, i]
                + jw[:, i] * n[:, i]
            )
            om[:, i] = np.maximum(nxt, omega_floor)
    if clamped:
        log.warning("jump probability exceeded 1 on %d steps and was clamped", clamped)
    return y, om, n, jy, jw, eps_w, clamped


def _check(omega0, T, delta):
    if not omega0 > 0:
        raise ValueError(f"omega0 must be > 0, got {omega0}")
    if T < 2:
        raise ValueError(f"T must be >= 2, got {T}")
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")


def simulate_path(
    variant: ModelVariant,
    p: PParams,
    q: QParams,
    y0: float | None = None,
    omega0: float | None = None,
    T: int = 1989,
    delta: float = DEFAULT_DELTA,
    seed: int = 0,
    omega_floor: float = OMEGA_FLOOR,
) -> SimulatedPath:
    """Simulate logVIX and its variance with the daily Euler scheme.

    ``y0``/``omega0`` default to the stationary means of the P dynamics.
    """
    variant = ModelVariant(variant)
    p, q = apply_variant(variant, p.validate(), q.validate())
    y_bar, omega_bar = stationary_means(p, q)
    y0 = y_bar if y0 is None else y0
    omega0 = omega_bar if omega0 is None else omega0
    _check(omega0, T, delta)
    rng = np.random.Generator(np.random.PCG64(seed))
    shocks = _draw_shocks(rng, T + 2)[:, None, :]
    y, om, n, jy, jw, eps_w, clamped = _euler(
        variant, p, q, y0, omega0, T, delta, shocks, omega_floor
    )
    vvix = np.full(T + 2, np.nan)
    return SimulatedPath(
        y=y[0], omega=om[0], n=n[0], j_y=jy[0], j_omega=jw[0], vvix_sq=vvix,
        delta=delta, seed=seed, eps_y=shocks[0, 0].copy(), eps_omega=eps_w[0],
        clamped_steps=clamped,
    )


def simulate_paths(
    variant: ModelVariant,
    p: PParams,
    q: QParams,
    y0: float,
    omega0: float,
    T: int,
    n_paths: int,
    seed: int,
    delta: float = DEFAULT_DELTA,
    omega_floor: float = OMEGA_FLOOR,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate ``n_paths`` logVIX/variance paths; returns ``(y, omega)``.

    Path ``k`` uses the ``k``-th child stream of ``SeedSequence(seed)`` so its
    draws do not depend on how many siblings are simulated alongside it.
    """
    variant = ModelVariant(variant)
    p, q = apply_variant(variant, p.validate(), q.validate())
    _check(omega0, T, delta)
    children = np.random.SeedSequence(seed).spawn(n_paths)
    shocks = np.stack(
        [_draw_shocks(np.random.Generator(np.random.PCG64(c)), T + 2) for c in children],
        axis=1,
    )
    y, om, *_ = _euler(variant, p, q, y0, omega0, T, delta, shocks, omega_floor)
    return y, om


def observe_vvix(
    path: SimulatedPath,
    q: QParams,
    tau: float = DEFAULT_TAU,
    sigma_P: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Noisy decimal VVIX² on days ``1..T``: ``A + B*omega + N(0, sigma_P²)``."""
    if sigma_P < 0:
        raise ValueError(f"sigma_P must be >= 0, got {sigma_P}")
    lo = affine_loadings(q, tau)
    T = path.T
    rng = np.random.Generator(np.random.PCG64(seed))
    out = np.full(T + 2, np.nan)
    out[1 : T + 1] = lo.A + lo.B * path.omega[1 : T + 1] + sigma_P * rng.standard_normal(T)
    return out


def simulate_dataset(
    variant: ModelVariant,
    p: PParams,
    q: QParams,
    sigma_P: float,
    T: int = 1989,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
    tau: float = DEFAULT_TAU,
    y0: float | None = None,
    omega0: float | None = None,
) -> SimulatedPath:
    """Path plus VVIX² observations, both derived from one master seed."""
    path_seed, obs_seed = np.random.SeedSequence(seed).generate_state(2)
    path = simulate_path(variant, p, q, y0, omega0, T, delta, int(path_seed))
    variant = ModelVariant(variant)
    _, q_eff = apply_variant(variant, p, q)
    path.vvix_sq = observe_vvix(path, q_eff, tau, sigma_P, int(obs_seed))
    path.seed = seed
    return path
