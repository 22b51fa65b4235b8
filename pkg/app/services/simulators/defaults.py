"""
Per-scenario model defaults: random-walk order, basis size, domain rule,
smoothing scales and the sampler's target acceptance.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog

from app.core.errors import ConfigurationError, EmptyDataError
from app.models.enums import DomainRule, ScenarioId
from app.schemas.config import InitSettings, ModelConfig, SamplerSettings
from app.schemas.dataset import DomainSpec, GroupedDataset, StandardizationInfo
from app.schemas.scenario import ScenarioSpec

logger = structlog.get_logger(__name__)

# each side of the observed range is extended by this fraction of its width
PAD_FRACTION = 0.005
GAUSSIAN_TARGET_ACCEPT = 0.985
DEFAULT_TARGET_ACCEPT = 0.99


@dataclass(frozen=True)
class ScenarioDefaults:
    r: int
    K: int
    domain_rule: DomainRule
    delta: float
    small_group_delta: Optional[float] = None
    small_group_size: int = 10
    target_accept: float = DEFAULT_TARGET_ACCEPT


DEFAULTS = {
    ScenarioId.GAUSS_LINEAR: ScenarioDefaults(
        3, 10, DomainRule.PAD, 0.1, target_accept=GAUSSIAN_TARGET_ACCEPT
    ),
    ScenarioId.GAUSS_QUADRATIC: ScenarioDefaults(
        3, 10, DomainRule.PAD, 0.1, target_accept=GAUSSIAN_TARGET_ACCEPT
    ),
    ScenarioId.EXP_LINEAR: ScenarioDefaults(2, 20, DomainRule.ZERO_TO_MAX, 0.1),
    ScenarioId.BETA_LINEAR: ScenarioDefaults(1, 12, DomainRule.UNIT_INTERVAL, 1.0),
    ScenarioId.BETA_QUADRATIC: ScenarioDefaults(1, 15, DomainRule.UNIT_INTERVAL, 1.0),
    ScenarioId.CROON: ScenarioDefaults(
        3,
        10,
        DomainRule.OBSERVED_RANGE,
        0.1,
        small_group_delta=0.05,
        target_accept=GAUSSIAN_TARGET_ACCEPT,
    ),
}


def domain_bounds(rule: DomainRule, x) -> Tuple[float, float]:
    """
    Original-scale domain [a', b'] for pooled covariates x.

    Args:
        rule: How to derive the endpoints
        x: All covariate measurements, original scale

    Returns:
        (a', b')
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise EmptyDataError("No covariate measurements to derive a domain from")
    lo, hi = float(x.min()), float(x.max())
    if rule == DomainRule.UNIT_INTERVAL:
        return 0.0, 1.0
    if rule == DomainRule.ZERO_TO_MAX:
        return 0.0, hi
    if rule == DomainRule.OBSERVED_RANGE:
        return lo, hi
    pad = PAD_FRACTION * (hi - lo)
    return lo - pad, hi + pad


def default_config_for(
    spec: ScenarioSpec,
    dataset: GroupedDataset,
    info: StandardizationInfo,
    sampler: Optional[SamplerSettings] = None,
    init: Optional[InitSettings] = None,
) -> ModelConfig:
    """
    The model configuration used for a simulated scenario.

    Args:
        spec: Scenario the data was simulated from
        dataset: The data, original scale
        info: Standardization the fit will use
        sampler: Sampler settings; the scenario's target acceptance is applied
            when omitted
        init: Initialization settings

    Returns:
        ModelConfig with per-group delta
    """
    defaults = DEFAULTS[spec.scenario]
    a_prime, b_prime = domain_bounds(defaults.domain_rule, dataset.pooled_covariates())
    if not a_prime < b_prime:
        raise ConfigurationError(
            f"Domain rule {defaults.domain_rule.value} gives an empty interval "
            f"[{a_prime}, {b_prime}]"
        )
    domain = DomainSpec.from_original(a_prime, b_prime, defaults.K, info)

    delta = np.full(dataset.n_groups, defaults.delta)
    if defaults.small_group_delta is not None:
        small = dataset.group_sizes <= defaults.small_group_size
        delta[small] = defaults.small_group_delta

    sampler = sampler or SamplerSettings(target_accept=defaults.target_accept)
    logger.info(
        "Default configuration",
        scenario=spec.scenario.value,
        r=defaults.r,
        K=defaults.K,
        domain=[a_prime, b_prime],
        rule=defaults.domain_rule.value,
    )
    return ModelConfig(
        r=defaults.r,
        K=defaults.K,
        domain=domain,
        delta=delta.tolist(),
        has_scalar_covariate=dataset.has_scalar_covariate,
        sampler=sampler,
        init=init or InitSettings(),
    )
