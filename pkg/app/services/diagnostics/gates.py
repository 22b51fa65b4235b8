"""
Convergence gates applied to every fit.
"""

import math
from typing import Optional

import structlog

from app.core.errors import GateFailure
from app.schemas.results import GateReport, PosteriorSummary

logger = structlog.get_logger(__name__)

RHAT_THRESHOLD = 1.01
ESS_THRESHOLD = 400.0
ESS_TARGET = 450.0


def evaluate_gates(
    summary: PosteriorSummary,
    divergences: int,
    rhat_threshold: float = RHAT_THRESHOLD,
    ess_threshold: float = ESS_THRESHOLD,
) -> GateReport:
    """
    Check max R-hat, min (capped) ESS and the divergence count.

    Parameters whose diagnostics are undefined (constant by construction,
    such as beta0[0]) are listed in `undefined` and left out of the max/min.
    """
    undefined = [
        p.name for p in summary.parameters if math.isnan(p.rhat) or math.isnan(p.ess)
    ]
    defined = [p for p in summary.parameters if p.name not in set(undefined)]
    max_rhat = max((p.rhat for p in defined), default=float("nan"))
    min_ess = min((p.ess for p in defined), default=float("nan"))

    failures = []
    if defined and max_rhat > rhat_threshold:
        worst = max(defined, key=lambda p: p.rhat)
        failures.append(f"max R-hat {max_rhat:.4f} > {rhat_threshold} ({worst.name})")
    if defined and min_ess < ess_threshold:
        worst = min(defined, key=lambda p: p.ess)
        failures.append(f"min ESS {min_ess:.1f} < {ess_threshold:g} ({worst.name})")
    if divergences > 0:
        failures.append(f"{divergences} divergent transitions")

    report = GateReport(
        max_rhat=max_rhat,
        min_ess=min_ess,
        divergences=divergences,
        rhat_threshold=rhat_threshold,
        ess_threshold=ess_threshold,
        passed=not failures,
        failures=failures,
        undefined=undefined,
    )
    log = logger.info if report.passed else logger.warning
    log(
        "Diagnostic gates evaluated",
        passed=report.passed,
        max_rhat=max_rhat,
        min_ess=min_ess,
        divergences=divergences,
        undefined=len(undefined),
    )
    if report.passed and not math.isnan(min_ess) and min_ess < ESS_TARGET:
        logger.info("ESS below the per-scenario target", min_ess=min_ess, target=ESS_TARGET)
    return report


def enforce_gates(report: GateReport, enabled: bool = True, details: Optional[dict] = None) -> None:
    """Raise GateFailure for a failed report unless gating is disabled."""
    if enabled and not report.passed:
        raise GateFailure(report.failures, details or report.model_dump())
