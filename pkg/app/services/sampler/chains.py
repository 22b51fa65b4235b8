"""
Multi-chain driver.

Each chain owns a generator derived from (seed, chain index), so results do
not depend on how chains are spread over worker processes.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import structlog

from app.core.errors import DimensionMismatchError
from app.schemas.config import SamplerSettings
from app.services.sampler.adaptation import adapt
from app.services.sampler.nuts import NutsKernel

logger = structlog.get_logger(__name__)


def chain_rng(seed: int, chain: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chain,)))


@dataclass
class ChainOutput:
    """Post-warmup draws of one chain with per-iteration sampler statistics."""

    chain: int
    draws: np.ndarray
    logp: np.ndarray
    accept_stat: np.ndarray
    divergent: np.ndarray
    tree_depth: np.ndarray
    n_leapfrog: np.ndarray
    step_size: float
    inv_mass: np.ndarray
    warmup_divergences: int
    warmup_seconds: float
    sampling_seconds: float
    decoded: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_divergent(self) -> int:
        return int(self.divergent.sum())


def _decode_draws(model, draws: np.ndarray) -> Dict[str, np.ndarray]:
    if not hasattr(model, "transform"):
        return {}
    per_draw = [model.transform(q) for q in draws]
    if not per_draw:
        return {}
    return {name: np.stack([d[name] for d in per_draw]) for name in per_draw[0]}


def run_chain(
    model,
    q0: np.ndarray,
    settings: SamplerSettings,
    chain: int,
) -> ChainOutput:
    """
    Warm up and sample one chain.

    Args:
        model: Object with dimension and value_and_grad(q); transform(q) if
            constrained draws are wanted
        q0: Starting point
        settings: Sampler settings; settings.seed and chain pick the stream
        chain: Chain index

    Returns:
        ChainOutput with `settings.sampling` draws
    """
    rng = chain_rng(settings.seed, chain)
    q0 = np.asarray(q0, dtype=float)
    if q0.shape != (model.dimension,):
        raise DimensionMismatchError(
            f"Initial point has shape {q0.shape}, model dimension is {model.dimension}"
        )
    log = logger.bind(chain=chain, dimension=model.dimension)
    log.info("Chain started", warmup=settings.warmup, sampling=settings.sampling)

    started = time.perf_counter()
    warm = adapt(
        model.value_and_grad,
        q0,
        settings.warmup,
        settings.target_accept,
        settings.max_tree_depth,
        rng,
        chain=chain,
    )
    warmup_seconds = time.perf_counter() - started
    log.info(
        "Warmup finished",
        step_size=warm.step_size,
        divergences=warm.divergences,
        seconds=round(warmup_seconds, 2),
    )

    kernel = NutsKernel(
        model.value_and_grad, warm.step_size, warm.inv_mass, settings.max_tree_depth
    )
    S = settings.sampling
    draws = np.empty((S, model.dimension))
    logp = np.empty(S)
    accept = np.empty(S)
    divergent = np.zeros(S, dtype=bool)
    depth = np.zeros(S, dtype=int)
    n_leapfrog = np.zeros(S, dtype=int)

    q, lp, grad = warm.q, warm.logp, warm.grad
    started = time.perf_counter()
    for i in range(S):
        result = kernel.transition(q, rng, lp, grad)
        q, lp, grad = result.q, result.logp, result.grad
        draws[i] = q
        logp[i] = lp
        accept[i] = result.accept_stat
        divergent[i] = result.diverged
        depth[i] = result.depth
        n_leapfrog[i] = result.n_leapfrog
    sampling_seconds = time.perf_counter() - started

    output = ChainOutput(
        chain=chain,
        draws=draws,
        logp=logp,
        accept_stat=accept,
        divergent=divergent,
        tree_depth=depth,
        n_leapfrog=n_leapfrog,
        step_size=warm.step_size,
        inv_mass=warm.inv_mass,
        warmup_divergences=warm.divergences,
        warmup_seconds=warmup_seconds,
        sampling_seconds=sampling_seconds,
        decoded=_decode_draws(model, draws),
    )
    log.info(
        "Chain finished",
        divergences=output.n_divergent,
        mean_tree_depth=float(depth.mean()),
        seconds=round(sampling_seconds, 2),
    )
    return output


def run_chains(
    model,
    inits: Sequence[np.ndarray],
    settings: SamplerSettings,
    workers: Optional[int] = None,
) -> List[ChainOutput]:
    """
    Run settings.chains independent chains, in a process pool when workers > 1.

    Raises:
        DimensionMismatchError: the number of initial points differs from the chain count
    """
    if len(inits) != settings.chains:
        raise DimensionMismatchError(
            f"Got {len(inits)} initial points for {settings.chains} chains"
        )
    workers = 1 if workers is None else max(1, min(workers, settings.chains))
    if workers == 1:
        return [run_chain(model, q0, settings, chain) for chain, q0 in enumerate(inits)]

    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_chain, model, q0, settings, chain)
            for chain, q0 in enumerate(inits)
        ]
        return [future.result() for future in futures]


def stack_draws(outputs: Sequence[ChainOutput]) -> np.ndarray:
    """C x S x D array of unconstrained draws."""
    return np.stack([o.draws for o in outputs])


def stack_decoded(outputs: Sequence[ChainOutput]) -> Dict[str, np.ndarray]:
    """Decoded quantities as C x S x ... arrays."""
    if not outputs or not outputs[0].decoded:
        return {}
    return {name: np.stack([o.decoded[name] for o in outputs]) for name in outputs[0].decoded}
