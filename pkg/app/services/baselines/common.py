"""
Pieces shared by the scalar baselines: the regression-block priors (the same
ones the FRODO regression block uses) and the sampled-model base class.
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np

from app.models.enums import ScaleKind
from app.services.gradient_engine import primitives as ad
from app.services.gradient_engine.autodiff import value_and_grad
from app.services.gradient_engine.layout import BlockLayout
from app.services.model_core import distributions as dist
from app.services.model_core.distributions import LOG_2
from app.services.model_core.priors import SIGMA_Y_GAMMA_RATE, SIGMA_Y_GAMMA_SHAPE
from app.services.model_core.regression import DIFFUSE_SCALE

SIGMA_Y_BLOCKS: List[Tuple[str, Tuple[int, ...]]] = [
    ("log_sigma_y_z", ()),
    ("log_sigma_y_g", ()),
]


def sigma_y_log_prior(blocks):
    """Half-normal numerator and Gamma(2, 2) denominator, log-scale Jacobians included."""
    return (
        dist.half_normal(ad.exp(blocks["log_sigma_y_z"]), 1.0)
        + dist.gamma_log_scale(blocks["log_sigma_y_g"], SIGMA_Y_GAMMA_SHAPE, SIGMA_Y_GAMMA_RATE)
        + blocks["log_sigma_y_z"]
        + blocks["log_sigma_y_g"]
    )


def sigma_y_start() -> Dict[str, float]:
    """Blocks that decode to sigma_Y = 1."""
    return {"log_sigma_y_z": 0.5 * LOG_2, "log_sigma_y_g": 0.0}


def diffuse_normal(x, sigma_y):
    """N(0, 20 sigma_Y), the prior of intercepts and scalar coefficients."""
    return dist.normal(x, 0.0, DIFFUSE_SCALE * sigma_y)


def standardize_regressor(values) -> Tuple[float, float]:
    """Mean and sd (ddof=1) of a regressor; sd 1 when it is constant."""
    values = np.asarray(values, dtype=float)
    center = float(values.mean())
    scale = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return center, scale if scale > 0 else 1.0


class BaselineModel:
    """
    A scalar baseline in flat unconstrained coordinates.

    Subclasses set `name`, `layout` and implement `_target(q)`,
    `initial_blocks()` and `transform(q)`.
    """

    name = "baseline"
    layout: BlockLayout
    kinds: Dict[str, ScaleKind] = {}

    @property
    def dimension(self) -> int:
        return self.layout.dimension

    @property
    def scale_kinds(self) -> Dict[str, ScaleKind]:
        return self.kinds

    def _target(self, q):
        raise NotImplementedError

    def initial_blocks(self) -> Dict[str, object]:
        raise NotImplementedError

    def transform(self, q) -> Dict[str, np.ndarray]:
        raise NotImplementedError

    def log_density(self, q) -> float:
        return float(ad.value_of(self._target(np.asarray(q, dtype=float))))

    def value_and_grad(self, q):
        return value_and_grad(self._target, q)

    def initial_point(self) -> np.ndarray:
        return self.layout.pack(self.initial_blocks())

    def component_names(self) -> Sequence[str]:
        return self.layout.component_names()
