"""
Chain initialization: penalized Poisson fit of the counts, inversion to the
non-centered state and jittered starts.
"""

from app.services.init_strategy.pspline import fit_all, pspline_poisson_fit
from app.services.init_strategy.inversion import (
    LatentGuess,
    invert_to_noncentered,
    preliminary_latent,
)
from app.services.init_strategy.jitter import chain_starts, init_rng, jitter_flat, jitter_init

__all__ = [
    "fit_all",
    "pspline_poisson_fit",
    "LatentGuess",
    "invert_to_noncentered",
    "preliminary_latent",
    "chain_starts",
    "init_rng",
    "jitter_flat",
    "jitter_init",
]
