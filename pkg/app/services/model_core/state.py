"""
Numerical domain types of the FRODO model.

These hold numpy arrays and live inside the computation; the pydantic
schemas in app.schemas describe what crosses the file boundary.
"""

from dataclasses import dataclass, fields
from typing import Any, Dict, Optional

import numpy as np

from app.core.errors import DataError, DimensionMismatchError
from app.schemas.dataset import DomainSpec


@dataclass(frozen=True)
class BinnedCovariates:
    """Per-group bin counts m_ik; the sufficient statistic of the density likelihood."""

    counts: np.ndarray
    domain: DomainSpec

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 2 or counts.shape[1] != self.domain.K:
            raise DimensionMismatchError(
                f"Counts must be N x {self.domain.K}, got shape {counts.shape}"
            )
        if (counts < 0).any():
            raise DataError("Bin counts must be non-negative")
        object.__setattr__(self, "counts", counts.astype(int))

    @property
    def group_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def n_groups(self) -> int:
        return self.counts.shape[0]

    @property
    def K(self) -> int:
        return self.counts.shape[1]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def covariate_mass(self) -> np.ndarray:
        """Fraction of all covariate measurements falling in each bin."""
        total = self.total
        if total == 0:
            return np.zeros(self.K)
        return self.counts.sum(axis=0) / total


@dataclass(frozen=True)
class Responses:
    y: np.ndarray
    z: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.z is not None:
            z = np.asarray(self.z, dtype=float)
            if z.shape != self.y.shape:
                raise DimensionMismatchError("z must have one value per group")
            object.__setattr__(self, "z", z)

    @property
    def n_groups(self) -> int:
        return self.y.shape[0]


@dataclass(frozen=True)
class DensityCoefficients:
    """Histogram heights phi_ik; each row integrates to one over bins of width h."""

    phi: np.ndarray
    h: float

    def normalization_error(self) -> float:
        if self.phi.size == 0:
            return 0.0
        return float(np.max(np.abs(self.h * self.phi.sum(axis=1) - 1.0)))


@dataclass(frozen=True)
class CoefficientFunction:
    """Piecewise-constant regression coefficient beta_k on the K bins."""

    values: np.ndarray
    centered: bool = False


@dataclass
class ParameterState:
    """
    Unconstrained sampling state in the non-centered parameterization.

    Positive quantities are held on the log scale (log_tau, log_sigma_x, ...).
    The latent block is xi_raw/mu_xi/log_sigma_xi/log_sigma_x for r=3,
    log_lambda/log_mu_lambda/log_alpha_lambda for r=2 and absent for r=1.
    """

    eta_free: np.ndarray
    eta_rw: np.ndarray
    log_tau: np.ndarray
    alpha: float
    beta0_free: float
    beta0_rw: np.ndarray
    log_tau_beta: float
    log_sigma_y_z: float
    log_sigma_y_g: float
    xi_raw: Optional[np.ndarray] = None
    mu_xi: Optional[float] = None
    log_sigma_xi: Optional[float] = None
    log_sigma_x: Optional[float] = None
    log_lambda: Optional[np.ndarray] = None
    log_mu_lambda: Optional[float] = None
    log_alpha_lambda: Optional[float] = None
    beta_z: Optional[float] = None

    def as_blocks(self) -> Dict[str, Any]:
        """Named blocks that are present, keyed like the flat layout."""
        blocks = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                blocks[f.name] = value
        return blocks

    @classmethod
    def from_blocks(cls, blocks: Dict[str, Any]) -> "ParameterState":
        known = {f.name for f in fields(cls)}
        values = {}
        for name, value in blocks.items():
            if name not in known:
                raise DimensionMismatchError(f"Unknown parameter block '{name}'")
            array = np.asarray(value, dtype=float)
            values[name] = float(array) if array.ndim == 0 else array.copy()
        return cls(**values)
