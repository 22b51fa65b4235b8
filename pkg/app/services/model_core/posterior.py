"""
Joint log-posterior of the FRODO model and the model object handed to the sampler.
"""

from typing import Dict, Mapping, Optional, Union

import numpy as np

from app.core.errors import ConfigurationError, DimensionMismatchError
from app.models.enums import ScaleKind
from app.schemas.config import ModelConfig
from app.services.gradient_engine import primitives as ad
from app.services.gradient_engine.autodiff import value_and_grad
from app.services.gradient_engine.layout import ParameterLayout
from app.services.model_core.density import (
    decode_latent,
    decode_theta,
    log_multinomial_coefficient,
)
from app.services.model_core.priors import log_prior
from app.services.model_core.regression import (
    center,
    decode_beta0,
    decode_sigma_y,
    empirical_central_density,
    group_means,
    regression_log_likelihood,
)
from app.services.model_core.state import BinnedCovariates, ParameterState, Responses

SCALE_KINDS: Dict[str, ScaleKind] = {
    "tau": ScaleKind.NONE,
    "xi": ScaleKind.LOCATION_X,
    "mu_xi": ScaleKind.LOCATION_X,
    "sigma_xi": ScaleKind.SCALE_X,
    "sigma_x": ScaleKind.SCALE_X,
    "lambda": ScaleKind.RATE_X,
    "mu_lambda": ScaleKind.RATE_X,
    "alpha_lambda": ScaleKind.NONE,
    "phi": ScaleKind.DENSITY_X,
    "alpha": ScaleKind.LOCATION_Y,
    "beta0": ScaleKind.COEF,
    "beta": ScaleKind.COEF,
    "tau_beta": ScaleKind.NONE,
    "sigma_y": ScaleKind.SCALE_Y,
    "beta_z": ScaleKind.COEF,
    "mu": ScaleKind.LOCATION_Y,
}


def _check_inputs(binned: BinnedCovariates, responses: Responses, cfg: ModelConfig) -> None:
    if binned.K != cfg.K:
        raise DimensionMismatchError(f"Counts have K={binned.K}, config has K={cfg.K}")
    if not binned.n_groups == responses.n_groups == cfg.n_groups:
        raise DimensionMismatchError(
            f"Group counts disagree: counts {binned.n_groups}, "
            f"responses {responses.n_groups}, delta {cfg.n_groups}"
        )
    if cfg.has_scalar_covariate != (responses.z is not None):
        raise ConfigurationError(
            "has_scalar_covariate must match whether the responses carry z"
        )


def _log_joint(
    blocks: Mapping[str, object],
    counts: np.ndarray,
    responses: Responses,
    cfg: ModelConfig,
    weights: Optional[np.ndarray],
    full: bool,
):
    prior = log_prior(blocks, cfg)
    if counts.shape[0] == 0:
        return prior

    theta = decode_theta(blocks, cfg)
    log_cell = ad.log_softmax(theta, axis=-1)
    density = ad.sum(counts * log_cell)
    if full:
        density = density + log_multinomial_coefficient(counts)

    sigma_y = decode_sigma_y(blocks)
    beta = center(decode_beta0(blocks, cfg.domain.h, sigma_y), weights)
    mu = group_means(
        blocks["alpha"], beta, ad.exp(log_cell), blocks.get("beta_z"), responses.z
    )
    response = regression_log_likelihood(mu, responses.y, sigma_y, full=full)
    return prior + density + response


def log_posterior(
    state: Union[ParameterState, Mapping[str, object]],
    data: BinnedCovariates,
    responses: Responses,
    cfg: ModelConfig,
    full: bool = False,
) -> float:
    """
    Joint log-density of a state given binned covariates and responses.

    Args:
        state: Unconstrained state or its named blocks
        data: Bin counts
        responses: Group responses and optional scalar covariate
        cfg: Model configuration
        full: Include the multinomial coefficients and Gaussian constants

    Returns:
        Log-posterior up to parameter-free constants (exact when full=True)
    """
    _check_inputs(data, responses, cfg)
    blocks = state.as_blocks() if isinstance(state, ParameterState) else state
    weights = empirical_central_density(data, cfg.domain.h) if data.n_groups else None
    return float(ad.value_of(_log_joint(blocks, data.counts, responses, cfg, weights, full)))


def decode_parameters(
    blocks: Mapping[str, object],
    cfg: ModelConfig,
    weights: Optional[np.ndarray],
    z: Optional[np.ndarray] = None,
) -> Dict[str, np.ndarray]:
    """Constrained quantities of one plain-array state, keyed by SCALE_KINDS names."""
    out: Dict[str, np.ndarray] = {"tau": np.exp(blocks["log_tau"])}
    for name, value in decode_latent(blocks, cfg).items():
        out[name] = np.asarray(value, dtype=float)

    theta = decode_theta(blocks, cfg)
    cell = np.exp(ad.log_softmax(theta, axis=-1))
    out["phi"] = cell / cfg.domain.h

    sigma_y = decode_sigma_y(blocks)
    beta0 = decode_beta0(blocks, cfg.domain.h, sigma_y)
    out["alpha"] = np.asarray(blocks["alpha"], dtype=float)
    out["beta0"] = beta0
    if weights is not None:
        beta = center(beta0, weights)
        out["beta"] = beta
        out["mu"] = group_means(blocks["alpha"], beta, cell, blocks.get("beta_z"), z)
    out["tau_beta"] = np.exp(np.asarray(blocks["log_tau_beta"], dtype=float))
    out["sigma_y"] = np.asarray(sigma_y, dtype=float)
    if "beta_z" in blocks:
        out["beta_z"] = np.asarray(blocks["beta_z"], dtype=float)
    return out


class FrodoPosterior:
    """
    The FRODO target in the flat unconstrained coordinates.

    Exposes the interface every sampled model shares: dimension,
    log_density, value_and_grad, transform and scale_kinds.
    """

    name = "frodo"

    def __init__(self, cfg: ModelConfig, binned: BinnedCovariates, responses: Responses):
        _check_inputs(binned, responses, cfg)
        self.cfg = cfg
        self.binned = binned
        self.responses = responses
        self.layout = ParameterLayout.for_config(cfg)
        self.weights = (
            empirical_central_density(binned, cfg.domain.h) if binned.n_groups else None
        )

    @property
    def dimension(self) -> int:
        return self.layout.dimension

    @property
    def scale_kinds(self) -> Dict[str, ScaleKind]:
        return SCALE_KINDS

    def _target(self, q, full: bool = False):
        blocks = self.layout.split(q)
        return _log_joint(
            blocks, self.binned.counts, self.responses, self.cfg, self.weights, full
        )

    def log_density(self, q, full: bool = False) -> float:
        return float(ad.value_of(self._target(np.asarray(q, dtype=float), full)))

    def value_and_grad(self, q):
        return value_and_grad(self._target, q)

    def blocks(self, q) -> Dict[str, np.ndarray]:
        return self.layout.split(np.asarray(q, dtype=float))

    def transform(self, q) -> Dict[str, np.ndarray]:
        return decode_parameters(self.blocks(q), self.cfg, self.weights, self.responses.z)

    def component_names(self):
        return self.layout.component_names()
