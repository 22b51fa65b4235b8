"""
Histogram binning of the covariate samples on the model domain.
"""

from typing import Optional

import numpy as np

from app.core.errors import ConfigurationError, OutOfDomainError
from app.schemas.dataset import DomainSpec, GroupedDataset, StandardizationInfo
from app.services.model_core.state import BinnedCovariates

# relative slack for values that land on an endpoint up to rounding
EDGE_TOLERANCE = 1e-12


def bin_indices(x, domain: DomainSpec) -> np.ndarray:
    """0-based bin of each value; bins are half-open except the last, which is closed."""
    x = np.asarray(x, dtype=float)
    edges = domain.edges()
    index = np.searchsorted(edges, x, side="right") - 1
    return np.clip(index, 0, domain.K - 1)


def bin_covariates(
    dataset: GroupedDataset,
    domain: DomainSpec,
    K: Optional[int] = None,
    info: Optional[StandardizationInfo] = None,
) -> BinnedCovariates:
    """
    Count every group's standardized covariates per bin.

    Args:
        dataset: Standardized dataset
        domain: Model domain; its standardized endpoints are used
        K: Expected number of bins, checked against the domain
        info: Used to report offending values on the original scale

    Returns:
        BinnedCovariates with rows summing to the group sizes

    Raises:
        OutOfDomainError: a value lies outside [a, b]
    """
    if K is not None and K != domain.K:
        raise ConfigurationError(f"Domain has {domain.K} bins, {K} requested")
    slack = EDGE_TOLERANCE * (domain.b - domain.a)
    counts = np.zeros((dataset.n_groups, domain.K), dtype=int)
    for i, x in enumerate(dataset.covariates()):
        outside = (x < domain.a - slack) | (x > domain.b + slack)
        if outside.any():
            value = float(x[outside][0])
            if info is not None:
                raise OutOfDomainError(
                    i, float(info.original_x(value)), domain.a_prime, domain.b_prime
                )
            raise OutOfDomainError(i, value, domain.a, domain.b)
        counts[i] = np.bincount(bin_indices(x, domain), minlength=domain.K)
    return BinnedCovariates(counts=counts, domain=domain)
