"""
Diffuse, finite chain starts.
"""

from typing import Callable, List, Optional

import numpy as np
import structlog

from app.core.errors import InitializationError
from app.schemas.config import InitSettings, ModelConfig
from app.services.gradient_engine.layout import flatten
from app.services.model_core.state import ParameterState

logger = structlog.get_logger(__name__)

# spawn-key component separating initialization streams from sampling streams
INIT_STREAM = 1


def init_rng(seed: int, chain: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chain, INIT_STREAM)))


def is_finite_start(value_and_grad: Callable, q: np.ndarray) -> bool:
    value, grad = value_and_grad(q)
    return bool(np.isfinite(value) and np.all(np.isfinite(grad)))


def _gamma_factor(rng: np.random.Generator, shape: float, size=None):
    """Gamma(shape, shape) draws, mean one; shape 0 gives exactly one."""
    if shape <= 0:
        return np.ones(size) if size is not None else 1.0
    return rng.gamma(shape, 1.0 / shape, size=size)


def _jittered(
    state: ParameterState, cfg: ModelConfig, settings: InitSettings, rng: np.random.Generator
) -> ParameterState:
    blocks = {k: np.array(v, dtype=float) for k, v in state.as_blocks().items()}
    if settings.theta_noise > 0:
        for name in ("eta_free", "eta_rw"):
            blocks[name] = blocks[name] + settings.theta_noise * rng.standard_normal(
                blocks[name].shape
            )
    if settings.tau_shape > 0:
        delta = np.asarray(cfg.delta, dtype=float)
        tau = rng.gamma(settings.tau_shape, delta / settings.tau_shape)
        blocks["log_tau"] = np.log(tau)
    for name in ("log_sigma_xi", "log_sigma_x", "log_mu_lambda", "log_alpha_lambda"):
        if name in blocks and settings.scale_shape > 0:
            blocks[name] = blocks[name] + np.log(_gamma_factor(rng, settings.scale_shape))
    return ParameterState.from_blocks(blocks)


def jitter_init(
    state: ParameterState,
    cfg: ModelConfig,
    value_and_grad: Callable,
    rng: np.random.Generator,
    settings: Optional[InitSettings] = None,
) -> ParameterState:
    """
    Randomize a start until its log-posterior and gradient are finite.

    Innovations get N(0, theta_noise^2) noise, tau_i is drawn from
    Gamma(tau_shape, rate tau_shape / delta_i) and latent scales are multiplied
    by Gamma(scale_shape, scale_shape) factors.

    Raises:
        InitializationError: no finite start after settings.max_retries draws
    """
    settings = settings or cfg.init
    for attempt in range(1, settings.max_retries + 1):
        candidate = _jittered(state, cfg, settings, rng)
        if is_finite_start(value_and_grad, flatten(candidate, cfg).values):
            if attempt > 1:
                logger.info("Finite start found after retries", attempts=attempt)
            return candidate
    raise InitializationError(
        f"No finite log-posterior start after {settings.max_retries} attempts",
        {"max_retries": settings.max_retries},
    )


def jitter_flat(
    q0,
    value_and_grad: Callable,
    rng: np.random.Generator,
    scale: float = 0.1,
    max_retries: int = 20,
) -> np.ndarray:
    """Gaussian perturbation of a flat start, retried until finite."""
    q0 = np.asarray(q0, dtype=float)
    for _ in range(max_retries):
        candidate = q0 + scale * rng.standard_normal(q0.shape)
        if is_finite_start(value_and_grad, candidate):
            return candidate
    raise InitializationError(
        f"No finite log-posterior start after {max_retries} attempts",
        {"max_retries": max_retries},
    )


def chain_starts(
    base: ParameterState,
    cfg: ModelConfig,
    value_and_grad: Callable,
) -> List[np.ndarray]:
    """One jittered flat start per chain, from the per-chain initialization streams."""
    starts = []
    for chain in range(cfg.sampler.chains):
        rng = init_rng(cfg.sampler.seed, chain)
        state = jitter_init(base, cfg, value_and_grad, rng)
        starts.append(flatten(state, cfg).values)
    logger.info("Chain starts ready", chains=len(starts))
    return starts
