"""
Naive scalar baselines: Bayesian regression on a per-group summary of the
covariate sample, treated as exactly known.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np

from app.core.errors import DimensionMismatchError
from app.models.enums import BaselineKind, ScaleKind
from app.services.baselines.bspline import bspline_basis, pspline_knots
from app.services.baselines.common import (
    SIGMA_Y_BLOCKS,
    BaselineModel,
    diffuse_normal,
    sigma_y_log_prior,
    sigma_y_start,
    standardize_regressor,
)
from app.services.gradient_engine import primitives as ad
from app.services.gradient_engine.layout import BlockLayout
from app.services.model_core import distributions as dist
from app.services.model_core.priors import TAU_BETA_RATE
from app.services.model_core.regression import (
    DIFFUSE_SCALE,
    decode_beta0,
    decode_sigma_y,
    regression_log_likelihood,
)

GAM_KNOTS = 20
GAM_DEGREE = 3
GAM_GRID = 50


def derived_covariate(kind: BaselineKind, samples: Sequence[np.ndarray]) -> np.ndarray:
    """Group sample means, or means of (x - 1/2)^2 for the transformed baseline."""
    if kind == BaselineKind.NAIVE_TRANSFORMED:
        return np.array([np.mean((np.asarray(x) - 0.5) ** 2) for x in samples])
    return np.array([np.mean(x) for x in samples])


class NaiveRegression(BaselineModel):
    """
    y_i = alpha + g(w_i) + beta_z z_i + e_i with w_i a fixed group summary.

    g is linear for naive_linear/naive_transformed and a centered cubic
    P-spline with a second-order random-walk prior for naive_gam. Responses
    are expected standardized; w is used on its own scale and standardized
    internally.
    """

    def __init__(
        self,
        kind: BaselineKind,
        covariate,
        y,
        z: Optional[np.ndarray] = None,
        n_knots: int = GAM_KNOTS,
    ):
        self.kind = kind
        self.name = kind.value
        self.w = np.asarray(covariate, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.z = None if z is None else np.asarray(z, dtype=float)
        if self.w.shape != self.y.shape:
            raise DimensionMismatchError("One covariate summary per response is required")
        self.w_center, self.w_scale = standardize_regressor(self.w)
        self.w_std = (self.w - self.w_center) / self.w_scale
        self.spline = kind == BaselineKind.NAIVE_GAM

        shapes: List = [("alpha", ())]
        kinds = {
            "alpha": ScaleKind.LOCATION_Y,
            "sigma_y": ScaleKind.SCALE_Y,
            "mu": ScaleKind.LOCATION_Y,
        }
        if self.spline:
            lo, hi = float(self.w_std.min()), float(self.w_std.max())
            if not hi > lo:
                hi = lo + 1.0
            self.knots = pspline_knots(lo, hi, n_knots, GAM_DEGREE)
            self.knot_spacing = (hi - lo) / (n_knots - 1)
            basis = bspline_basis(self.w_std, self.knots, GAM_DEGREE)
            self.basis_mean = basis.mean(axis=0)
            self.design = basis - self.basis_mean
            self.grid = np.linspace(self.w.min(), self.w.max(), GAM_GRID)
            grid_std = np.clip((self.grid - self.w_center) / self.w_scale, lo, hi)
            self.grid_design = bspline_basis(grid_std, self.knots, GAM_DEGREE) - self.basis_mean
            n_basis = self.design.shape[1]
            shapes += [("beta0_free", ()), ("beta0_rw", (n_basis - 2,)), ("log_tau_beta", ())]
            kinds.update({"curve": ScaleKind.COEF, "tau_beta": ScaleKind.NONE})
        else:
            shapes += [("beta_raw", ())]
            kinds["beta"] = ScaleKind.COEF
        if self.z is not None:
            shapes.append(("beta_z", ()))
            kinds["beta_z"] = ScaleKind.COEF
        self.layout = BlockLayout(shapes + SIGMA_Y_BLOCKS)
        self.kinds = kinds

    def _smooth(self, blocks, sigma_y, design):
        if self.spline:
            coef = decode_beta0(blocks, self.knot_spacing, sigma_y)
            return design @ coef
        return DIFFUSE_SCALE * sigma_y * blocks["beta_raw"] * design

    def _target(self, q):
        blocks = self.layout.split(q)
        sigma_y = decode_sigma_y(blocks)
        prior = diffuse_normal(blocks["alpha"], sigma_y) + sigma_y_log_prior(blocks)
        if self.spline:
            prior = (
                prior
                + dist.std_normal(blocks["beta0_free"])
                + dist.std_normal(blocks["beta0_rw"])
                + dist.exponential(ad.exp(blocks["log_tau_beta"]), TAU_BETA_RATE)
                + blocks["log_tau_beta"]
            )
            mu = blocks["alpha"] + self._smooth(blocks, sigma_y, self.design)
        else:
            prior = prior + dist.std_normal(blocks["beta_raw"])
            mu = blocks["alpha"] + self._smooth(blocks, sigma_y, self.w_std)
        if self.z is not None:
            prior = prior + diffuse_normal(blocks["beta_z"], sigma_y)
            mu = mu + blocks["beta_z"] * self.z
        return prior + regression_log_likelihood(mu, self.y, sigma_y)

    def initial_blocks(self) -> Dict[str, object]:
        blocks: Dict[str, object] = {"alpha": 0.0, **sigma_y_start()}
        if self.spline:
            blocks.update(
                beta0_free=0.0,
                beta0_rw=np.zeros(self.design.shape[1] - 2),
                log_tau_beta=np.log(0.5),
            )
        else:
            blocks["beta_raw"] = 0.0
        if self.z is not None:
            blocks["beta_z"] = 0.0
        return blocks

    def transform(self, q) -> Dict[str, np.ndarray]:
        """
        Reported quantities: beta per unit of the raw summary with alpha the
        matching intercept, or the centered curve on `grid` for the GAM.
        """
        blocks = self.layout.split(np.asarray(q, dtype=float))
        sigma_y = decode_sigma_y(blocks)
        alpha = float(blocks["alpha"])
        out: Dict[str, np.ndarray] = {"sigma_y": np.asarray(sigma_y)}
        if self.spline:
            out["alpha"] = np.asarray(alpha)
            out["curve"] = self._smooth(blocks, sigma_y, self.grid_design)
            out["tau_beta"] = np.exp(np.asarray(blocks["log_tau_beta"]))
            mu = alpha + self._smooth(blocks, sigma_y, self.design)
        else:
            slope = DIFFUSE_SCALE * sigma_y * float(blocks["beta_raw"])
            beta = slope / self.w_scale
            out["alpha"] = np.asarray(alpha - beta * self.w_center)
            out["beta"] = np.asarray(beta)
            mu = alpha + slope * self.w_std
        if self.z is not None:
            out["beta_z"] = np.asarray(blocks["beta_z"])
            mu = mu + float(blocks["beta_z"]) * self.z
        out["mu"] = np.asarray(mu, dtype=float)
        return out
