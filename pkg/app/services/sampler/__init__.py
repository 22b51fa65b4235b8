"""
No-U-Turn sampler package: leapfrog dynamics, the NUTS transition, warmup
adaptation and the multi-chain driver.
"""

from app.services.sampler.hamiltonian import PhasePoint, leapfrog
from app.services.sampler.nuts import NutsKernel, TransitionResult, nuts_transition
from app.services.sampler.adaptation import (
    AdaptationResult,
    DualAveraging,
    WelfordVariance,
    adapt,
    window_schedule,
)
from app.services.sampler.chains import ChainOutput, run_chain, run_chains

__all__ = [
    "PhasePoint",
    "leapfrog",
    "NutsKernel",
    "TransitionResult",
    "nuts_transition",
    "AdaptationResult",
    "DualAveraging",
    "WelfordVariance",
    "adapt",
    "window_schedule",
    "ChainOutput",
    "run_chain",
    "run_chains",
]
