"""
Marginal standardization of responses and covariates, and the reverse map
applied to posterior summaries.
"""

from typing import Optional, Tuple

import numpy as np
import structlog

from app.core.errors import DataError
from app.models.enums import ScaleKind
from app.schemas.dataset import GroupedDataset, GroupRecord, StandardizationInfo
from app.schemas.results import ParameterSummary, PosteriorSummary

logger = structlog.get_logger(__name__)


def _moments(values: np.ndarray, label: str) -> Tuple[float, float]:
    if values.size < 2:
        raise DataError(f"Cannot standardize {label} from fewer than two values")
    sd = float(np.std(values, ddof=1))
    if not sd > 0:
        raise DataError(f"{label} has zero variance and cannot be standardized")
    return float(np.mean(values)), sd


def standardization_info(dataset: GroupedDataset, x: bool = True) -> StandardizationInfo:
    """
    Marginal means and standard deviations (ddof=1).

    With x=False only the responses are standardized and the covariate map is
    the identity.
    """
    y_mean, y_sd = _moments(dataset.y, "Y")
    if not x:
        return StandardizationInfo(y_mean=y_mean, y_sd=y_sd, x_mean=0.0, x_sd=1.0)
    x_mean, x_sd = _moments(dataset.pooled_covariates(), "X")
    return StandardizationInfo(y_mean=y_mean, y_sd=y_sd, x_mean=x_mean, x_sd=x_sd)


def standardize(
    dataset: GroupedDataset, info: Optional[StandardizationInfo] = None
) -> Tuple[GroupedDataset, StandardizationInfo]:
    """
    Standardize Y and X; the scalar covariate z is left as given.

    Args:
        dataset: Data on the original scale
        info: Map to apply; computed from the data when omitted

    Returns:
        Standardized dataset and the StandardizationInfo used
    """
    info = info or standardization_info(dataset)
    groups = [
        GroupRecord(
            y=(g.y - info.y_mean) / info.y_sd,
            x=info.standardize_x(g.x).tolist(),
            z=g.z,
        )
        for g in dataset.groups
    ]
    logger.debug("Standardized dataset", **info.model_dump())
    return GroupedDataset(groups=groups), info


def affine_map(kind: ScaleKind, info: StandardizationInfo) -> Tuple[float, float]:
    """(shift, factor) with original = shift + factor * standardized."""
    if kind == ScaleKind.LOCATION_X:
        return info.x_mean, info.x_sd
    if kind == ScaleKind.SCALE_X:
        return 0.0, info.x_sd
    if kind in (ScaleKind.RATE_X, ScaleKind.DENSITY_X):
        return 0.0, 1.0 / info.x_sd
    if kind == ScaleKind.LOCATION_Y:
        return info.y_mean, info.y_sd
    if kind in (ScaleKind.SCALE_Y, ScaleKind.COEF):
        return 0.0, info.y_sd
    if kind == ScaleKind.SLOPE:
        return 0.0, info.y_sd / info.x_sd
    if kind == ScaleKind.CURVATURE:
        return 0.0, info.y_sd / info.x_sd**2
    return 0.0, 1.0


def back_transform(summary: PosteriorSummary, info: StandardizationInfo) -> PosteriorSummary:
    """
    Map every summarized quantity to the original data scale.

    All maps are increasing affine maps, so quantiles map directly; ESS and
    R-hat are unchanged. A summary that is already back-transformed is
    returned as is.
    """
    if summary.back_transformed:
        logger.warning("Summary already on the original scale; left unchanged")
        return summary
    parameters = []
    for p in summary.parameters:
        shift, factor = affine_map(p.kind, info)
        parameters.append(
            ParameterSummary(
                name=p.name,
                mean=shift + factor * p.mean,
                sd=factor * p.sd,
                q2_5=shift + factor * p.q2_5,
                q97_5=shift + factor * p.q97_5,
                ess=p.ess,
                ess_raw=p.ess_raw,
                ess_tail=p.ess_tail,
                rhat=p.rhat,
                kind=p.kind,
            )
        )
    return PosteriorSummary(parameters=parameters, back_transformed=True, standardization=info)


def forward_transform(summary: PosteriorSummary) -> PosteriorSummary:
    """Inverse of back_transform, using the StandardizationInfo the summary carries."""
    if not summary.back_transformed or summary.standardization is None:
        return summary
    info = summary.standardization
    parameters = []
    for p in summary.parameters:
        shift, factor = affine_map(p.kind, info)
        parameters.append(
            p.model_copy(
                update={
                    "mean": (p.mean - shift) / factor,
                    "sd": p.sd / factor,
                    "q2_5": (p.q2_5 - shift) / factor,
                    "q97_5": (p.q97_5 - shift) / factor,
                }
            )
        )
    return PosteriorSummary(parameters=parameters)
