"""Stochastic volatility of VIX with VVIX-informed estimation."""

from .model import (
    AffineLoading,
    ModelError,
    ModelVariant,
    PParams,
    PricingError,
    QParams,
    affine_loadings,
    model_vvix_squared,
)

__version__ = "0.1.0"

__all__ = [
    "AffineLoading",
    "ModelError",
    "ModelVariant",
    "PParams",
    "PricingError",
    "QParams",
    "affine_loadings",
    "model_vvix_squared",
]
