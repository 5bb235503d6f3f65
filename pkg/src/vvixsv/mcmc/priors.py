"""Prior hyperparameters, proposal scales and chain settings."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..model import DEFAULT_DELTA, DEFAULT_TAU, PParams, QParams
from .state import OMEGA_FLOOR, Params

NORMAL_PARAMS = (
    "theta",
    "kappa_V",
    "varsigma_V",
    "kappa_omega_P",
    "mu_y_JP",
    "mu_omega_JP",
    "sigma_omega",
    "alpha_omega",
    "kappa_omega_Q",
    "lambda0",
    "lambda1",
    "mu_y",
    "mu_omega",
)
INVGAMMA_PARAMS = ("sigma_omega_J2", "sigma_y_J2", "sigma_P2")
Q_BLOCKS = ("alpha_omega", "kappa_omega_Q", "lambda0", "lambda1", "mu_y", "mu_omega")


@dataclass
class PriorHyper:
    """Normal ``(mean, variance)`` and inverse-gamma ``(shape, scale)`` priors.

    ``rho`` is uniform on (-1, 1).  Support restrictions (positivity of the
    mean-reversion speeds, intensities and so on) truncate the normals.
    ``steps`` holds initial random-walk proposal scales; the ``omega`` entry
    is relative to the starting variance of each day.
    """

    theta: tuple[float, float] = (2.9, 25.0)
    kappa_V: tuple[float, float] = (2.0, 25.0)
    varsigma_V: tuple[float, float] = (0.0, 25.0)
    kappa_omega_P: tuple[float, float] = (5.0, 25.0)
    mu_y_JP: tuple[float, float] = (0.0, 25.0)
    mu_omega_JP: tuple[float, float] = (0.0, 25.0)
    sigma_omega: tuple[float, float] = (1.0, 25.0)
    alpha_omega: tuple[float, float] = (3.0, 25.0)
    kappa_omega_Q: tuple[float, float] = (5.0, 25.0)
    lambda0: tuple[float, float] = (1.0, 25.0)
    lambda1: tuple[float, float] = (0.5, 25.0)
    mu_y: tuple[float, float] = (0.0, 25.0)
    mu_omega: tuple[float, float] = (0.0, 25.0)
    sigma_omega_J2: tuple[float, float] = (2.5, 0.1)
    sigma_y_J2: tuple[float, float] = (2.5, 0.1)
    sigma_P2: tuple[float, float] = (2.5, 0.1)
    steps: dict[str, float] = field(
        default_factory=lambda: {
            "omega": 0.1,
            "alpha_omega": 0.2,
            "kappa_omega_Q": 0.2,
            "lambda0": 0.2,
            "lambda1": 0.2,
            "mu_y": 0.02,
            "mu_omega": 0.1,
            "rho": 0.02,
            "sigma_omega": 0.02,
            "q_joint": 1.0,
            "ridge": 0.5,
        }
    )

    def __post_init__(self):
        for name in NORMAL_PARAMS:
            mean, var = getattr(self, name)
            if not var > 0:
                raise ValueError(f"prior variance for {name} must be > 0")
            setattr(self, name, (float(mean), float(var)))
        for name in INVGAMMA_PARAMS:
            shape, scale = getattr(self, name)
            if not (shape > 0 and scale > 0):
                raise ValueError(f"inverse-gamma prior for {name} needs shape, scale > 0")
            setattr(self, name, (float(shape), float(scale)))
        for name, step in self.steps.items():
            if not step > 0:
                raise ValueError(f"proposal step for {name} must be > 0")

    def as_dict(self) -> dict:
        return asdict(self)

    def log_normal_prior(self, name: str, value: float) -> float:
        mean, var = getattr(self, name)
        return -0.5 * (value - mean) ** 2 / var

    def initial_params(self) -> Params:
        """Prior means projected onto the valid parameter region."""
        def m(name):
            return getattr(self, name)[0]

        def ig_mean(name):
            a, b = getattr(self, name)
            return b / (a - 1.0) if a > 1.0 else b / a

        p = PParams(
            kappa_V=max(m("kappa_V"), 0.1),
            varsigma_V=m("varsigma_V"),
            theta=m("theta"),
            kappa_omega_P=max(m("kappa_omega_P"), 0.1),
            mu_y_JP=m("mu_y_JP"),
            mu_omega_JP=m("mu_omega_JP"),
            sigma_omega_J=float(np.sqrt(ig_mean("sigma_omega_J2"))),
            rho=0.0,
            sigma_omega=max(m("sigma_omega"), 0.05),
        )
        q = QParams(
            alpha_omega=max(m("alpha_omega"), 1e-3),
            kappa_omega_Q=max(m("kappa_omega_Q"), 0.1),
            lambda0=max(m("lambda0"), 0.0),
            lambda1=max(m("lambda1"), 0.0),
            mu_y=m("mu_y"),
            mu_omega=m("mu_omega"),
            sigma_y_J=float(np.sqrt(ig_mean("sigma_y_J2"))),
        )
        if q.kappa_eff <= 0:
            q = QParams(**{**vars(q), "mu_omega": 0.0})
        return Params(p=p, q=q, sigma_P=float(np.sqrt(ig_mean("sigma_P2"))))


def default_priors(y, delta: float = DEFAULT_DELTA, **overrides) -> PriorHyper:
    """Diffuse priors centred on rough moment-matched values for ``y``."""
    y = np.asarray(y, dtype=float)
    omega_bar = float(np.var(np.diff(y)) / delta)
    centres = {
        "theta": (float(np.mean(y)), 25.0),
        "alpha_omega": (5.0 * omega_bar, 25.0),
    }
    centres.update(overrides)
    return PriorHyper(**centres)


@dataclass
class ChainConfig:
    iterations: int = 5000
    burn_in: int = 2000
    thin: int = 1
    delta: float = DEFAULT_DELTA
    tau: float = DEFAULT_TAU
    adapt_window: int = 50
    target_accept: tuple[float, float] = (0.3, 0.5)
    seed: int = 0
    vvix_enabled: bool = True
    literal_q_target: bool = False
    omega_floor: float = OMEGA_FLOOR

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")
        if not (self.delta > 0 and self.tau > 0):
            raise ValueError("delta and tau must be > 0")
        if self.adapt_window < 1:
            raise ValueError("adapt_window must be >= 1")
        lo, hi = self.target_accept
        if not 0 < lo < hi < 1:
            raise ValueError("target_accept must be an increasing pair in (0, 1)")
        self.target_accept = (float(lo), float(hi))

    @property
    def n_retained(self) -> int:
        return len(range(self.burn_in, self.iterations, self.thin))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
