"""
Schema definitions for model, sampler and initialization settings.
"""

from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.errors import ConfigurationError, InvalidOrderError
from app.schemas.dataset import DomainSpec

SUPPORTED_ORDERS = (1, 2, 3)


class SamplerSettings(BaseModel):
    """
    NUTS settings. Defaults are the four-chain 750/1250 schedule with tree depth 12.

    max_tree_depth counts doublings from 0, one more than Stan's convention:
    a transition takes at most 2**(max_tree_depth + 1) - 1 leapfrog steps.
    """

    chains: int = 4
    warmup: int = 750
    sampling: int = 1250
    max_tree_depth: int = 12
    target_accept: float = 0.99
    seed: int = 0

    @model_validator(mode="after")
    def check_settings(self) -> "SamplerSettings":
        if self.chains < 1:
            raise ConfigurationError(f"chains must be >= 1, got {self.chains}")
        if self.warmup < 1 or self.sampling < 1:
            raise ConfigurationError("warmup and sampling must both be >= 1")
        if self.max_tree_depth < 0:
            raise ConfigurationError("max_tree_depth must be non-negative")
        if not 0.0 < self.target_accept < 1.0:
            raise ConfigurationError(
                f"target_accept must lie in (0, 1), got {self.target_accept}"
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        return self


class InitSettings(BaseModel):
    """
    Chain initialization settings.

    A zero theta_noise, tau_shape or scale_shape switches that part of the
    jitter off.
    """

    lambda_init: float = 1.0
    theta_noise: float = 0.1
    tau_shape: float = 2.0
    scale_shape: float = 4.0
    max_retries: int = 20

    @model_validator(mode="after")
    def check_settings(self) -> "InitSettings":
        if self.lambda_init <= 0:
            raise ConfigurationError("lambda_init must be positive")
        if min(self.theta_noise, self.tau_shape, self.scale_shape) < 0:
            raise ConfigurationError("Jitter scales must be non-negative")
        if self.max_retries < 1:
            raise ConfigurationError("max_retries must be >= 1")
        return self


class ModelConfig(BaseModel):
    """Everything the analyst chooses for a FRODO fit."""

    r: int
    K: int
    domain: DomainSpec
    delta: List[float]
    has_scalar_covariate: bool = False
    sampler: SamplerSettings = Field(default_factory=SamplerSettings)
    init: InitSettings = Field(default_factory=InitSettings)

    @model_validator(mode="after")
    def check_config(self) -> "ModelConfig":
        if self.r not in SUPPORTED_ORDERS:
            raise InvalidOrderError(f"Random-walk order must be 1, 2 or 3, got {self.r}")
        if self.K < max(self.r + 1, 2):
            raise InvalidOrderError(f"K={self.K} too small for order r={self.r}")
        if self.domain.K != self.K:
            raise ConfigurationError(
                f"Domain has K={self.domain.K} bins but the model uses K={self.K}"
            )
        if any(d <= 0 for d in self.delta):
            raise ConfigurationError("All delta_i must be positive")
        return self

    @property
    def n_groups(self) -> int:
        return len(self.delta)


class FlatFitConfig(BaseModel):
    """
    Flat key-value fit configuration as read from a TOML file.

    Keys mirror ModelConfig, SamplerSettings and InitSettings field names.
    Unset keys fall back to the scenario defaults.
    """

    model_config = ConfigDict(extra="forbid")

    r: Optional[int] = None
    K: Optional[int] = None
    a_prime: Optional[float] = None
    b_prime: Optional[float] = None
    delta: Optional[Union[float, List[float]]] = None
    chains: Optional[int] = None
    warmup: Optional[int] = None
    sampling: Optional[int] = None
    max_tree_depth: Optional[int] = None
    target_accept: Optional[float] = None
    seed: Optional[int] = None
    lambda_init: Optional[float] = None
    theta_noise: Optional[float] = None
    tau_shape: Optional[float] = None
    scale_shape: Optional[float] = None
    max_retries: Optional[int] = None

    def sampler_overrides(self) -> dict:
        keys = ("chains", "warmup", "sampling", "max_tree_depth", "target_accept", "seed")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}

    def init_overrides(self) -> dict:
        keys = ("lambda_init", "theta_noise", "tau_shape", "scale_shape", "max_retries")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}
