"""
Schema definitions for simulation scenarios, their ground truth and baseline specs.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.core.errors import ConfigurationError, IncompatibleBaselineError
from app.models.enums import BaselineKind, ScenarioId


class ScenarioSpec(BaseModel):
    """A simulation design: group layout, true parameter values and seed."""

    scenario: ScenarioId
    n_groups: int
    group_sizes: Optional[List[int]] = None
    params: Dict[str, float] = Field(default_factory=dict)
    seed: int = 0
    noise_free: bool = False

    @model_validator(mode="after")
    def check_spec(self) -> "ScenarioSpec":
        if self.n_groups < 2:
            raise ConfigurationError("A scenario needs at least 2 groups")
        if self.group_sizes is not None:
            if len(self.group_sizes) != self.n_groups:
                raise ConfigurationError("group_sizes length must equal n_groups")
            if min(self.group_sizes) < 1:
                raise ConfigurationError("Every group size must be >= 1")
        for name in ("sigma_xi", "sigma_x", "sigma_y"):
            if name in self.params and self.params[name] <= 0:
                raise ConfigurationError(f"{name} must be positive")
        return self


class GroundTruth(BaseModel):
    """True latent values and regression parameters behind a simulated dataset."""

    scenario: ScenarioId
    seed: int
    params: Dict[str, float]
    latent_name: str
    latent: List[float]
    expected_response: List[float]
    sigma_y: float
    beta_z: Optional[float] = None
    notes: List[str] = Field(default_factory=list)


_BASELINE_SCENARIOS = {
    BaselineKind.NAIVE_GAM: {ScenarioId.GAUSS_QUADRATIC},
    BaselineKind.NAIVE_TRANSFORMED: {ScenarioId.BETA_QUADRATIC},
}


class BaselineSpec(BaseModel):
    """Which scalar comparison model to fit, and on which scenario's data."""

    kind: BaselineKind
    scenario: ScenarioId

    @model_validator(mode="after")
    def check_compatible(self) -> "BaselineSpec":
        allowed = _BASELINE_SCENARIOS.get(self.kind)
        if allowed is not None and self.scenario not in allowed:
            raise IncompatibleBaselineError(
                f"{self.kind.value} cannot be used with scenario {self.scenario.value}"
            )
        return self

    @property
    def derived_covariate(self) -> str:
        if self.kind == BaselineKind.NAIVE_TRANSFORMED:
            return "mean of (x - 1/2)^2"
        if self.kind == BaselineKind.HIERARCHICAL:
            return "latent group variable"
        return "group sample mean"
