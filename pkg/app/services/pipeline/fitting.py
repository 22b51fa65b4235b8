"""
Sampling a model and turning its chains into summaries, gates and timings.

Shared by FRODO fits and the scalar baselines: anything with dimension,
value_and_grad, transform and scale_kinds can go through sample_model.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import structlog

from app.schemas.config import SamplerSettings
from app.schemas.dataset import StandardizationInfo
from app.schemas.results import ChainTiming, GateReport, PosteriorSummary
from app.services.diagnostics import evaluate_gates, per_chain_rhat, summarize
from app.services.pipeline.standardize import back_transform
from app.services.sampler.chains import ChainOutput, run_chains, stack_decoded, stack_draws

logger = structlog.get_logger(__name__)

STUCK_CHAIN_RHAT = 1.05


@dataclass
class ModelFit:
    """A sampled model with its summaries on both scales."""

    model: Any
    outputs: List[ChainOutput]
    decoded: Dict[str, np.ndarray]
    raw_summary: PosteriorSummary
    summary: PosteriorSummary
    gates: GateReport
    info: StandardizationInfo
    timings: List[ChainTiming]
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def draws(self) -> np.ndarray:
        return stack_draws(self.outputs)

    @property
    def divergences(self) -> int:
        return sum(o.n_divergent for o in self.outputs)


def chain_timings(outputs: Sequence[ChainOutput]) -> List[ChainTiming]:
    return [
        ChainTiming(
            chain=o.chain,
            warmup_seconds=o.warmup_seconds,
            sampling_seconds=o.sampling_seconds,
            step_size=o.step_size,
            divergences=o.n_divergent,
            mean_tree_depth=float(np.mean(o.tree_depth)),
        )
        for o in outputs
    ]


def per_chain_notes(decoded: Dict[str, np.ndarray]) -> Dict[str, Any]:
    """
    Split-R-hat of each chain alone for every scalar quantity.

    A chain whose two halves disagree has wandered between modes; those are
    listed under "stuck_chains".
    """
    rhats: Dict[str, List[float]] = {}
    stuck = set()
    for name, values in decoded.items():
        if values.ndim != 2 or values.shape[1] < 4:
            continue
        per_chain = per_chain_rhat(values)
        rhats[name] = [round(float(v), 4) for v in per_chain]
        stuck.update(int(c) for c in np.flatnonzero(per_chain > STUCK_CHAIN_RHAT))
    return {"per_chain_rhat": rhats, "stuck_chains": sorted(stuck)}


def sample_model(
    model,
    starts: Sequence[np.ndarray],
    settings: SamplerSettings,
    info: StandardizationInfo,
    workers: Optional[int] = None,
) -> ModelFit:
    """
    Run the chains, summarize the decoded draws and evaluate the gates.

    Args:
        model: Sampled model (FrodoPosterior or a baseline)
        starts: One unconstrained starting point per chain
        settings: Sampler settings
        info: Standardization the model was fitted under
        workers: Worker processes for the chains

    Returns:
        ModelFit; gates are evaluated but not enforced
    """
    log = logger.bind(model=getattr(model, "name", type(model).__name__))
    log.info("Sampling", chains=settings.chains, dimension=model.dimension)
    outputs = run_chains(model, starts, settings, workers)
    decoded = stack_decoded(outputs)
    raw_summary = summarize(decoded, model.scale_kinds)
    summary = back_transform(raw_summary, info)
    divergences = sum(o.n_divergent for o in outputs)
    gates = evaluate_gates(raw_summary, divergences)
    notes = per_chain_notes(decoded)
    if notes["stuck_chains"]:
        log.warning("Chains with disagreeing halves", chains=notes["stuck_chains"])
    return ModelFit(
        model=model,
        outputs=outputs,
        decoded=decoded,
        raw_summary=raw_summary,
        summary=summary,
        gates=gates,
        info=info,
        timings=chain_timings(outputs),
        notes=notes,
    )
