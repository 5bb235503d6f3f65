"""Gibbs/Metropolis estimation of the joint VIX-VVIX model."""

from .chain import ChainDivergenceError, ChainOutput, gibbs_sweep, run_chain
from .priors import ChainConfig, PriorHyper, default_priors
from .state import ChainData, LatentState, Params, coefficients

__all__ = [
    "ChainConfig",
    "ChainData",
    "ChainDivergenceError",
    "ChainOutput",
    "LatentState",
    "Params",
    "PriorHyper",
    "coefficients",
    "default_priors",
    "gibbs_sweep",
    "run_chain",
]
