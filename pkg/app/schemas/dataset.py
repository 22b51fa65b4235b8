"""
Schema definitions for grouped input data, the density domain and the
standardization applied before fitting.
"""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, computed_field, field_validator, model_validator

from app.core.errors import ConfigurationError, DataError


class GroupRecord(BaseModel):
    """One group: scalar response, individual covariate sample, optional scalar covariate."""

    y: float
    x: List[float]
    z: Optional[float] = None

    @field_validator("x")
    @classmethod
    def check_sample(cls, value: List[float]) -> List[float]:
        if len(value) < 1:
            raise DataError("Every group needs at least one covariate measurement")
        if not all(math.isfinite(v) for v in value):
            raise DataError("Covariate measurements must be finite")
        return value

    @model_validator(mode="after")
    def check_finite(self) -> "GroupRecord":
        if not math.isfinite(self.y):
            raise DataError(f"Response {self.y!r} is not finite")
        if self.z is not None and not math.isfinite(self.z):
            raise DataError(f"Scalar covariate {self.z!r} is not finite")
        return self


class GroupedDataset(BaseModel):
    """Raw input: one record per group."""

    groups: List[GroupRecord]

    @model_validator(mode="after")
    def check_groups(self) -> "GroupedDataset":
        if len(self.groups) < 2:
            raise DataError(f"Need at least 2 groups, got {len(self.groups)}")
        with_z = sum(g.z is not None for g in self.groups)
        if with_z not in (0, len(self.groups)):
            raise DataError("Scalar covariate z must be present for all groups or none")
        return self

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def has_scalar_covariate(self) -> bool:
        return self.groups[0].z is not None

    @property
    def group_sizes(self) -> np.ndarray:
        return np.array([len(g.x) for g in self.groups], dtype=int)

    @property
    def y(self) -> np.ndarray:
        return np.array([g.y for g in self.groups], dtype=float)

    @property
    def z(self) -> Optional[np.ndarray]:
        if not self.has_scalar_covariate:
            return None
        return np.array([g.z for g in self.groups], dtype=float)

    def covariates(self) -> List[np.ndarray]:
        return [np.asarray(g.x, dtype=float) for g in self.groups]

    def pooled_covariates(self) -> np.ndarray:
        return np.concatenate(self.covariates())


class StandardizationInfo(BaseModel):
    """Marginal location and scale of Y and X used to standardize the data."""

    y_mean: float
    y_sd: float
    x_mean: float
    x_sd: float

    @model_validator(mode="after")
    def check_scales(self) -> "StandardizationInfo":
        if not (self.y_sd > 0 and self.x_sd > 0):
            raise DataError("Standardization scales must be positive")
        return self

    @classmethod
    def identity(cls) -> "StandardizationInfo":
        return cls(y_mean=0.0, y_sd=1.0, x_mean=0.0, x_sd=1.0)

    def standardize_x(self, x):
        return (np.asarray(x, dtype=float) - self.x_mean) / self.x_sd

    def original_x(self, x):
        return np.asarray(x, dtype=float) * self.x_sd + self.x_mean


class DomainSpec(BaseModel):
    """
    Assumed common support of the covariate densities.

    a_prime/b_prime are on the original scale, a/b on the standardized scale.
    The bins are [a + (k-1)h, a + kh) for k < K with the last bin closed at b.
    """

    a_prime: float
    b_prime: float
    a: float
    b: float
    K: int

    @model_validator(mode="after")
    def check_interval(self) -> "DomainSpec":
        if self.K < 1:
            raise ConfigurationError(f"K must be positive, got {self.K}")
        if not self.a < self.b:
            raise ConfigurationError(f"Domain requires a < b, got [{self.a}, {self.b}]")
        if not self.a_prime < self.b_prime:
            raise ConfigurationError(
                f"Domain requires a' < b', got [{self.a_prime}, {self.b_prime}]"
            )
        return self

    @computed_field
    @property
    def h(self) -> float:
        return (self.b - self.a) / self.K

    @classmethod
    def from_original(
        cls, a_prime: float, b_prime: float, K: int, info: StandardizationInfo
    ) -> "DomainSpec":
        """
        Build a domain from original-scale endpoints.

        Args:
            a_prime: Left endpoint on the original scale
            b_prime: Right endpoint on the original scale
            K: Number of bins
            info: Standardization of the covariates

        Returns:
            DomainSpec with standardized endpoints a = (a' - mean)/sd, b likewise
        """
        return cls(
            a_prime=a_prime,
            b_prime=b_prime,
            a=(a_prime - info.x_mean) / info.x_sd,
            b=(b_prime - info.x_mean) / info.x_sd,
            K=K,
        )

    def edges(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.K + 1)

    def midpoints(self) -> np.ndarray:
        return self.a + self.h * (np.arange(self.K) + 0.5)

    def original_midpoints(self) -> np.ndarray:
        h_prime = (self.b_prime - self.a_prime) / self.K
        return self.a_prime + h_prime * (np.arange(self.K) + 0.5)
