"""
Posterior summaries, pointwise credible bands and the secant slope of beta.
"""

from typing import Dict, Iterable, NamedTuple, Optional, Tuple

import numpy as np
import structlog

from app.core.errors import DimensionMismatchError
from app.models.enums import ScaleKind
from app.schemas.dataset import DomainSpec, StandardizationInfo
from app.schemas.results import ParameterSummary, PosteriorSummary
from app.services.diagnostics.convergence import ess, ess_tail, split_rhat

logger = structlog.get_logger(__name__)

LOWER_QUANTILE = 0.025
UPPER_QUANTILE = 0.975
QUANTILE_METHOD = "linear"
MIN_BAND_DRAWS = 100


def quantiles(values, axis=None) -> Tuple[np.ndarray, np.ndarray]:
    """The 2.5% and 97.5% empirical quantiles, linear interpolation."""
    lo, hi = np.quantile(
        values, [LOWER_QUANTILE, UPPER_QUANTILE], axis=axis, method=QUANTILE_METHOD
    )
    return lo, hi


def component_name(name: str, index: Tuple[int, ...]) -> str:
    if not index:
        return name
    return f"{name}[{','.join(str(i) for i in index)}]"


def iter_components(name: str, draws: np.ndarray) -> Iterable[Tuple[str, np.ndarray]]:
    """Yield (component name, C x S draws) for every element of a C x S x ... array."""
    for index in np.ndindex(*draws.shape[2:]):
        yield component_name(name, index), draws[(slice(None), slice(None)) + index]


def summarize_component(name: str, chains: np.ndarray, kind: ScaleKind) -> ParameterSummary:
    chains = np.asarray(chains, dtype=float)
    flat = chains.ravel()
    lo, hi = quantiles(flat)
    raw_ess = ess(chains)
    return ParameterSummary(
        name=name,
        mean=float(flat.mean()),
        sd=float(flat.std(ddof=1)) if flat.size > 1 else 0.0,
        q2_5=float(lo),
        q97_5=float(hi),
        ess=float(min(raw_ess, flat.size)) if np.isfinite(raw_ess) else raw_ess,
        ess_raw=raw_ess,
        ess_tail=ess_tail(chains),
        rhat=split_rhat(chains),
        kind=kind,
    )


def summarize(
    draws: Dict[str, np.ndarray],
    kinds: Optional[Dict[str, ScaleKind]] = None,
) -> PosteriorSummary:
    """
    Summarize named C x S x ... draw arrays component by component.

    ESS is capped at the total draw count; the uncapped value is kept as
    ess_raw. Tail ESS is reported alongside and does not enter the gates.
    """
    kinds = kinds or {}
    parameters = []
    for name, values in draws.items():
        values = np.asarray(values, dtype=float)
        kind = kinds.get(name, ScaleKind.NONE)
        for component, chains in iter_components(name, values):
            parameters.append(summarize_component(component, chains, kind))
    logger.debug("Summarized draws", parameters=len(parameters))
    return PosteriorSummary(parameters=parameters)


class FunctionalBand(NamedTuple):
    mean: np.ndarray
    lo: np.ndarray
    hi: np.ndarray


def functional_bands(draws) -> FunctionalBand:
    """
    Bin-wise posterior mean and pointwise 95% band.

    Args:
        draws: (..., K) draws of a function on K bins; leading axes are pooled

    Returns:
        FunctionalBand of K-vectors
    """
    draws = np.asarray(draws, dtype=float)
    flat = draws.reshape(-1, draws.shape[-1])
    if flat.shape[0] < MIN_BAND_DRAWS:
        logger.warning("Few draws for a credible band", draws=flat.shape[0])
    lo, hi = quantiles(flat, axis=0)
    return FunctionalBand(mean=flat.mean(axis=0), lo=lo, hi=hi)


def secant_slope(
    beta_means,
    domain: DomainSpec,
    info: Optional[StandardizationInfo] = None,
) -> float:
    """
    Slope of the line through beta at the first and last bin midpoints.

    With `info` the slope is reported on the original data scale
    (multiplied by y_sd / x_sd).
    """
    beta_means = np.asarray(beta_means, dtype=float)
    K = beta_means.shape[0]
    if K < 2:
        raise DimensionMismatchError("A secant needs at least two bins")
    slope = (beta_means[-1] - beta_means[0]) / ((K - 1) * domain.h)
    if info is not None:
        slope *= info.y_sd / info.x_sd
    return float(slope)
