"""
Cross-run comparison tables: posterior sigma_Y per model and sampler behaviour.
"""

from dataclasses import dataclass
from typing import List, Sequence

import pandas as pd
import structlog

from app.core.errors import EmptyDataError
from app.schemas.results import PosteriorSummary, RunManifest

logger = structlog.get_logger(__name__)


@dataclass
class RunRecord:
    """A finished run as read back from its directory."""

    name: str
    manifest: RunManifest
    summary: PosteriorSummary

    @property
    def label(self) -> str:
        kind = self.manifest.run_kind
        return kind.split(":", 1)[1] if ":" in kind else kind


def _check(records: Sequence[RunRecord]) -> None:
    if not records:
        raise EmptyDataError("No runs to report on")


def sigma_y_table(records: Sequence[RunRecord]) -> pd.DataFrame:
    """One row per run: scenario, model, posterior mean and 95% interval of sigma_Y."""
    _check(records)
    rows = []
    for record in records:
        sigma = record.summary.get("sigma_y")
        rows.append(
            {
                "scenario": record.manifest.scenario,
                "model": record.label,
                "mean": sigma.mean,
                "q2_5": sigma.q2_5,
                "q97_5": sigma.q97_5,
                "run": record.name,
            }
        )
    return pd.DataFrame(rows)


def sampler_table(records: Sequence[RunRecord]) -> pd.DataFrame:
    """Slowest chain warmup and sampling times, min ESS, max R-hat and divergences per run."""
    _check(records)
    rows = []
    for record in records:
        timings = record.manifest.timings
        gates = record.manifest.gates
        rows.append(
            {
                "scenario": record.manifest.scenario,
                "model": record.label,
                "max_warmup_seconds": max((t.warmup_seconds for t in timings), default=0.0),
                "max_sampling_seconds": max((t.sampling_seconds for t in timings), default=0.0),
                "min_ess": gates.min_ess,
                "max_rhat": gates.max_rhat,
                "divergences": gates.divergences,
                "run": record.name,
            }
        )
    return pd.DataFrame(rows)


def _format_table(frame: pd.DataFrame) -> str:
    return frame.drop(columns=["run"]).to_string(index=False, float_format=lambda v: f"{v:.3f}")


def render_digest(records: Sequence[RunRecord]) -> str:
    """Human-readable summary of both tables plus per-run gate outcomes and secant slopes."""
    _check(records)
    lines: List[str] = ["Posterior inference for sigma_Y", ""]
    lines.append(_format_table(sigma_y_table(records)))
    lines += ["", "Sampler behaviour", "", _format_table(sampler_table(records)), ""]
    for record in records:
        gates = record.manifest.gates
        status = "passed" if gates.passed else "FAILED: " + "; ".join(gates.failures)
        lines.append(f"{record.name} [{record.label}] gates {status}")
        slope = record.manifest.notes.get("secant_slope")
        if slope is not None:
            lines.append(f"  secant slope of beta: {slope:.4f}")
        stuck = record.manifest.notes.get("stuck_chains")
        if stuck:
            lines.append(f"  chains with disagreeing halves: {stuck}")
    logger.debug("Report rendered", runs=len(records))
    return "\n".join(lines) + "\n"
