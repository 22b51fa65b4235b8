"""
Prior stack of the FRODO model in the non-centered parameterization.
"""

from typing import Dict, Mapping, Union

import numpy as np

from app.schemas.config import ModelConfig
from app.schemas.dataset import DomainSpec
from app.services.gradient_engine import primitives as ad
from app.services.model_core import distributions as dist
from app.services.model_core.density import decode_latent
from app.services.model_core.regression import DIFFUSE_SCALE, decode_sigma_y
from app.services.model_core.state import ParameterState

TAU_BETA_RATE = 2.0
SIGMA_Y_GAMMA_SHAPE = 2.0
SIGMA_Y_GAMMA_RATE = 2.0
ALPHA_LAMBDA_SCALE = 10.0


def mu_xi_prior_mean(domain: DomainSpec) -> float:
    """(a'b - b'a) / (a' - b'), which equals -mean(X)/sd(X)."""
    return (domain.a_prime * domain.b - domain.b_prime * domain.a) / (
        domain.a_prime - domain.b_prime
    )


def mu_xi_prior_sd(K: int) -> float:
    return 15.0 / K**2


def log_prior_components(
    state: Union[ParameterState, Mapping[str, object]], cfg: ModelConfig
) -> Dict[str, object]:
    """
    Named log-prior terms; their sum is the log prior of the sampled vector.

    Every term is a normalized log-density. Parameters sampled on the log
    scale contribute their raw value to "jacobian".
    """
    blocks = state.as_blocks() if isinstance(state, ParameterState) else state
    delta = np.asarray(cfg.delta, dtype=float)
    terms: Dict[str, object] = {}

    terms["innovations"] = dist.std_normal(blocks["eta_free"]) + dist.std_normal(
        blocks["eta_rw"]
    )
    tau = ad.exp(blocks["log_tau"])
    terms["tau"] = dist.exponential(tau, 1.0 / delta)
    jacobian = ad.sum(blocks["log_tau"])

    latent = decode_latent(blocks, cfg)
    if cfg.r == 3:
        terms["latent"] = (
            dist.std_normal(blocks["xi_raw"])
            + dist.normal(
                blocks["mu_xi"], mu_xi_prior_mean(cfg.domain), mu_xi_prior_sd(cfg.K)
            )
            + dist.half_normal(latent["sigma_xi"], 1.0)
            + dist.half_normal(latent["sigma_x"], 1.0)
        )
        jacobian = jacobian + blocks["log_sigma_xi"] + blocks["log_sigma_x"]
    elif cfg.r == 2:
        shape = latent["alpha_lambda"]
        log_rate = blocks["log_alpha_lambda"] - blocks["log_mu_lambda"]
        terms["latent"] = (
            dist.gamma_log_scale(
                blocks["log_lambda"], shape, ad.exp(log_rate), log_rate=log_rate
            )
            + dist.half_normal(latent["mu_lambda"], 1.0)
            + dist.half_normal(shape, ALPHA_LAMBDA_SCALE)
        )
        jacobian = (
            jacobian
            + ad.sum(blocks["log_lambda"])
            + blocks["log_mu_lambda"]
            + blocks["log_alpha_lambda"]
        )

    sigma_y = decode_sigma_y(blocks)
    diffuse = DIFFUSE_SCALE * sigma_y
    regression = (
        dist.normal(blocks["alpha"], 0.0, diffuse)
        + dist.std_normal(blocks["beta0_free"])
        + dist.std_normal(blocks["beta0_rw"])
        + dist.exponential(ad.exp(blocks["log_tau_beta"]), TAU_BETA_RATE)
    )
    if "beta_z" in blocks:
        regression = regression + dist.normal(blocks["beta_z"], 0.0, diffuse)
    terms["regression"] = regression
    jacobian = jacobian + blocks["log_tau_beta"]

    terms["sigma_y"] = dist.half_normal(
        ad.exp(blocks["log_sigma_y_z"]), 1.0
    ) + dist.gamma_log_scale(
        blocks["log_sigma_y_g"], SIGMA_Y_GAMMA_SHAPE, SIGMA_Y_GAMMA_RATE
    )
    jacobian = jacobian + blocks["log_sigma_y_z"] + blocks["log_sigma_y_g"]

    terms["jacobian"] = jacobian
    return terms


def log_prior(state, cfg: ModelConfig):
    total = 0.0
    for value in log_prior_components(state, cfg).values():
        total = total + value
    return total
