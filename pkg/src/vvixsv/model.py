"""Parameter sets, nested model variants and the affine VVIX² mapping.

logVIX ``Y`` and its variance factor ``omega`` follow a double-jump affine
model.  Under the pricing measure the squared (decimal) VVIX over a horizon
``tau`` is affine in the spot variance::

    VVIX²(t, t+tau) = A(tau) + B(tau) * omega(t)

Units: ``Y = ln(VIX points)``, ``omega`` is the annualised variance of ``Y``
and VVIX is divided by 100 before squaring.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_TAU = 30.0 / 365.0
DEFAULT_DELTA = 1.0 / 252.0
# switch to the series expansion of (1 - exp(-x)) / x below this |x|
SERIES_SWITCH = 1e-8


class ModelError(ValueError):
    """Raised when a parameter set violates its invariants."""


class ModelVariant(str, enum.Enum):
    SV = "SV"
    SVJ_C = "SVJ_C"
    SVJJ_C = "SVJJ_C"
    SVJJ_S = "SVJJ_S"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.strip().upper().replace("-", "_")
            key = "SVJ_C" if key == "SVJ" else key
            for member in cls:
                if member.value == key:
                    return member
        return None

    @classmethod
    def parse(cls, text: str) -> "ModelVariant":
        key = text.strip().upper().replace("-", "_")
        if key == "SVJ":
            key = "SVJ_C"
        try:
            return cls(key)
        except ValueError:
            raise ModelError(f"unknown model variant {text!r}") from None

    @property
    def has_jumps(self) -> bool:
        return self is not ModelVariant.SV

    @property
    def has_vol_jumps(self) -> bool:
        return self in (ModelVariant.SVJJ_C, ModelVariant.SVJJ_S)

    @property
    def state_dependent_intensity(self) -> bool:
        return self is ModelVariant.SVJJ_S


@dataclass(frozen=True)
class PParams:
    """Physical-measure parameters.

    ``sigma_omega_J`` is shared with the pricing measure.
    """

    kappa_V: float
    varsigma_V: float
    theta: float
    kappa_omega_P: float
    mu_y_JP: float
    mu_omega_JP: float
    sigma_omega_J: float
    rho: float
    sigma_omega: float

    def validate(self) -> "PParams":
        if not self.kappa_V > 0:
            raise ModelError(f"kappa_V must be > 0, got {self.kappa_V}")
        if not self.kappa_omega_P > 0:
            raise ModelError(f"kappa_omega_P must be > 0, got {self.kappa_omega_P}")
        if not self.sigma_omega > 0:
            raise ModelError(f"sigma_omega must be > 0, got {self.sigma_omega}")
        if not self.sigma_omega_J >= 0:
            raise ModelError(f"sigma_omega_J must be >= 0, got {self.sigma_omega_J}")
        if not -1.0 < self.rho < 1.0:
            raise ModelError(f"rho must lie in (-1, 1), got {self.rho}")
        return self


@dataclass(frozen=True)
class QParams:
    """Pricing-measure parameters (``sigma_y_J`` shared with P)."""

    alpha_omega: float
    kappa_omega_Q: float
    lambda0: float
    lambda1: float
    mu_y: float
    mu_omega: float
    sigma_y_J: float

    @property
    def kappa_eff(self) -> float:
        return self.kappa_omega_Q - self.lambda1 * self.mu_omega

    @property
    def jump_second_moment(self) -> float:
        return self.mu_y**2 + self.sigma_y_J**2

    def violation(self) -> str | None:
        """Describe the first violated invariant, or None when valid."""
        if not self.alpha_omega > 0:
            return f"alpha_omega must be > 0, got {self.alpha_omega}"
        if not self.lambda0 >= 0:
            return f"lambda0 must be >= 0, got {self.lambda0}"
        if not self.lambda1 >= 0:
            return f"lambda1 must be >= 0, got {self.lambda1}"
        if not self.sigma_y_J >= 0:
            return f"sigma_y_J must be >= 0, got {self.sigma_y_J}"
        if not self.kappa_eff > 0:
            return f"kappa_omega_Q - lambda1*mu_omega must be > 0, got {self.kappa_eff}"
        return None

    def validate(self) -> "QParams":
        msg = self.violation()
        if msg:
            raise ModelError(msg)
        return self


@dataclass(frozen=True)
class PricingError:
    sigma_P: float

    def validate(self) -> "PricingError":
        if not self.sigma_P > 0:
            raise ModelError(f"sigma_P must be > 0, got {self.sigma_P}")
        return self


@dataclass(frozen=True)
class AffineLoading:
    tau: float
    alpha_Q: float
    beta_Q: float
    A: float
    B: float


def jump_intensity(q: QParams, omega):
    """Jump arrival rate ``lambda0 + lambda1 * omega`` (per year)."""
    if np.any(np.asarray(omega) < 0):
        raise ModelError(f"omega must be non-negative, got {omega}")
    return q.lambda0 + q.lambda1 * omega


def _alpha_beta(q: QParams, tau: float) -> tuple[float, float]:
    if not tau > 0:
        raise ModelError(f"tau must be > 0, got {tau}")
    k = q.kappa_eff
    if not k > 0:
        raise ModelError(f"kappa_omega_Q - lambda1*mu_omega must be > 0, got {k}")
    x = k * tau
    drift = q.alpha_omega + q.lambda0 * q.mu_omega
    if abs(x) < SERIES_SWITCH:
        alpha_Q = tau * (1.0 - x / 2.0)
        # (tau - alpha_Q) / k = tau²/2 - k tau³/6 + ...
        beta_Q = tau * tau * (0.5 - x / 6.0) * drift
    else:
        alpha_Q = -math.expm1(-x) / k
        beta_Q = (tau - alpha_Q) * drift / k
    return alpha_Q, beta_Q


def expected_integrated_variance(q: QParams, omega_t: float, tau: float):
    """Return ``(alpha_Q, beta_Q, E_t[int_t^{t+tau} omega ds])`` under Q."""
    alpha_Q, beta_Q = _alpha_beta(q, tau)
    return alpha_Q, beta_Q, alpha_Q * omega_t + beta_Q


def expected_jump_quadratic(q: QParams, omega_t: float, tau: float) -> float:
    """Expected sum of squared logVIX jumps over ``(t, t+tau]`` under Q."""
    alpha_Q, beta_Q = _alpha_beta(q, tau)
    m2 = q.jump_second_moment
    return m2 * (q.lambda0 * tau + q.lambda1 * beta_Q + q.lambda1 * alpha_Q * omega_t)


def affine_loadings(q: QParams, tau: float = DEFAULT_TAU) -> AffineLoading:
    alpha_Q, beta_Q = _alpha_beta(q, tau)
    m2 = q.jump_second_moment
    A = (beta_Q + m2 * (q.lambda0 * tau + q.lambda1 * beta_Q)) / tau
    B = (1.0 + q.lambda1 * m2) * alpha_Q / tau
    return AffineLoading(tau=tau, alpha_Q=alpha_Q, beta_Q=beta_Q, A=A, B=B)


def model_vvix_squared(q: QParams, omega_t, tau: float = DEFAULT_TAU):
    """Model-implied decimal VVIX² for spot variance ``omega_t``."""
    lo = affine_loadings(q, tau)
    return lo.A + lo.B * omega_t


def p_from_q_drift(q: QParams, varsigma_omega: float, sigma_omega: float) -> float:
    """kappa_omega under P from the Q speed and the volatility risk premium."""
    if not sigma_omega > 0:
        raise ModelError(f"sigma_omega must be > 0, got {sigma_omega}")
    return q.kappa_omega_Q + varsigma_omega * sigma_omega


def varsigma_omega(p: PParams, q: QParams) -> float:
    """Volatility risk premium implied by the two mean-reversion speeds."""
    return (p.kappa_omega_P - q.kappa_omega_Q) / p.sigma_omega


def apply_variant(variant: ModelVariant, p: PParams, q: QParams) -> tuple[PParams, QParams]:
    """Zero out the parameters a nested variant does not carry."""
    variant = ModelVariant(variant)
    if variant is ModelVariant.SVJJ_S:
        return p, q
    q = replace(q, lambda1=0.0)
    if variant is ModelVariant.SVJJ_C:
        return p, q
    p = replace(p, mu_omega_JP=0.0, sigma_omega_J=0.0)
    q = replace(q, mu_omega=0.0)
    if variant is ModelVariant.SVJ_C:
        return p, q
    p = replace(p, mu_y_JP=0.0)
    q = replace(q, lambda0=0.0, mu_y=0.0, sigma_y_J=0.0)
    return p, q


def stationary_means(p: PParams, q: QParams) -> tuple[float, float]:
    """Long-run means ``(y_bar, omega_bar)`` of the P dynamics."""
    denom = p.kappa_omega_P - q.lambda1 * p.mu_omega_JP
    if not denom > 0:
        raise ModelError("P volatility dynamics are not mean reverting")
    omega_bar = (q.alpha_omega + q.lambda0 * p.mu_omega_JP) / denom
    lam_bar = q.lambda0 + q.lambda1 * omega_bar
    y_bar = p.theta + (lam_bar * p.mu_y_JP - p.varsigma_V * omega_bar) / p.kappa_V
    return y_bar, omega_bar


# Reference SVJJ-S parameter set (posterior means from a 2007-2014 fit); the simulation default.
REFERENCE_P = PParams(
    kappa_V=2.1093,
    varsigma_V=-0.1538,
    theta=2.3312,
    kappa_omega_P=6.2849,
    mu_y_JP=0.1551,
    mu_omega_JP=0.1430,
    sigma_omega_J=0.1420,
    rho=0.4998,
    sigma_omega=0.8461,
)
REFERENCE_Q = QParams(
    alpha_omega=3.7938,
    kappa_omega_Q=2.5674,
    lambda0=2.7557,
    lambda1=1.6086,
    mu_y=-0.0960,
    mu_omega=-1.2046,
    sigma_y_J=0.1231,
)
REFERENCE_SIGMA_P = 0.0612
