"""
Inversion of density coefficients to the non-centered parameterization.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import structlog

from app.core.errors import DimensionMismatchError
from app.schemas.config import ModelConfig
from app.schemas.dataset import GroupedDataset
from app.services.model_core.density import decode_latent, free_coefficient_means
from app.services.model_core.distributions import LOG_2
from app.services.model_core.operators import finite_difference
from app.services.model_core.state import ParameterState

logger = structlog.get_logger(__name__)

TAU_FLOOR = 1e-3
SCALE_FLOOR = 1e-3


@dataclass
class LatentGuess:
    """Preliminary smoothing scales and latent group values for the inversion."""

    tau: np.ndarray
    xi: Optional[np.ndarray] = None
    mu_xi: Optional[float] = None
    sigma_xi: Optional[float] = None
    sigma_x: Optional[float] = None
    lam: Optional[np.ndarray] = None
    mu_lambda: Optional[float] = None
    alpha_lambda: Optional[float] = None

    @classmethod
    def from_state(cls, state: ParameterState, cfg: ModelConfig) -> "LatentGuess":
        latent = {k: np.asarray(v, dtype=float) for k, v in decode_latent(state, cfg).items()}
        guess = cls(tau=np.exp(state.log_tau))
        if cfg.r == 3:
            guess.xi = latent["xi"]
            guess.mu_xi = float(latent["mu_xi"])
            guess.sigma_xi = float(latent["sigma_xi"])
            guess.sigma_x = float(latent["sigma_x"])
        elif cfg.r == 2:
            guess.lam = latent["lambda"]
            guess.mu_lambda = float(latent["mu_lambda"])
            guess.alpha_lambda = float(latent["alpha_lambda"])
        return guess


def preliminary_latent(dataset: GroupedDataset, cfg: ModelConfig) -> LatentGuess:
    """
    Method-of-moments guesses from a standardized dataset.

    xi_i is the group sample mean and sigma_x the pooled within-group sd;
    lambda_i = 1 / (group mean - a). tau_i starts at delta_i, the prior mean.
    """
    tau = np.asarray(cfg.delta, dtype=float).copy()
    guess = LatentGuess(tau=tau)
    samples = dataset.covariates()
    means = np.array([x.mean() for x in samples])
    if cfg.r == 3:
        resid = np.concatenate([x - x.mean() for x in samples])
        dof = max(resid.size - len(samples), 1)
        guess.xi = means
        guess.sigma_x = float(np.sqrt(resid @ resid / dof))
    elif cfg.r == 2:
        offset = np.maximum(means - cfg.domain.a, SCALE_FLOOR)
        guess.lam = 1.0 / offset
    return guess


def _positive(value: float, name: str) -> float:
    if not value > SCALE_FLOOR:
        logger.warning("Initial scale guess clamped", parameter=name, value=value)
        return SCALE_FLOOR
    return float(value)


def _latent_blocks(guess: LatentGuess, cfg: ModelConfig) -> Dict[str, object]:
    if cfg.r == 3:
        xi = np.asarray(guess.xi, dtype=float)
        mu_xi = float(np.mean(xi)) if guess.mu_xi is None else guess.mu_xi
        spread = float(np.std(xi, ddof=1)) if xi.size > 1 else 1.0
        sigma_xi = _positive(spread if guess.sigma_xi is None else guess.sigma_xi, "sigma_xi")
        sigma_x = _positive(1.0 if guess.sigma_x is None else guess.sigma_x, "sigma_x")
        return {
            "xi_raw": (xi - mu_xi) / sigma_xi,
            "mu_xi": mu_xi,
            "log_sigma_xi": np.log(sigma_xi),
            "log_sigma_x": np.log(sigma_x),
        }
    if cfg.r == 2:
        lam = np.maximum(np.asarray(guess.lam, dtype=float), SCALE_FLOOR)
        mu_lambda = float(np.mean(lam)) if guess.mu_lambda is None else guess.mu_lambda
        alpha_lambda = guess.alpha_lambda
        if alpha_lambda is None:
            var = float(np.var(lam, ddof=1)) if lam.size > 1 else 0.0
            alpha_lambda = mu_lambda**2 / var if var > 0 else 1.0
        return {
            "log_lambda": np.log(lam),
            "log_mu_lambda": np.log(_positive(mu_lambda, "mu_lambda")),
            "log_alpha_lambda": np.log(_positive(alpha_lambda, "alpha_lambda")),
        }
    return {}


def default_regression_block(has_scalar_covariate: bool, K: int) -> Dict[str, object]:
    """Intercept 0, flat beta0, tau_beta at its prior mean and sigma_Y = 1."""
    blocks: Dict[str, object] = {
        "alpha": 0.0,
        "beta0_free": 0.0,
        "beta0_rw": np.zeros(K - 2),
        "log_tau_beta": np.log(0.5),
        "log_sigma_y_z": 0.5 * LOG_2,
        "log_sigma_y_g": 0.0,
    }
    if has_scalar_covariate:
        blocks["beta_z"] = 0.0
    return blocks


def invert_to_noncentered(
    theta_hat,
    cfg: ModelConfig,
    guess: LatentGuess,
    regression: Optional[Dict[str, object]] = None,
) -> ParameterState:
    """
    Solve for the innovations that make decode_theta reproduce theta_hat.

    Args:
        theta_hat: N x K log-density coefficients; rows are shifted so the
            first coefficient is 0
        cfg: Model configuration
        guess: Smoothing scales and latent values to invert against
        regression: Regression block; defaults to default_regression_block

    Returns:
        ParameterState whose decoded theta equals the shifted theta_hat
    """
    theta_hat = np.asarray(theta_hat, dtype=float)
    N = cfg.n_groups
    if theta_hat.shape != (N, cfg.K):
        raise DimensionMismatchError(
            f"theta_hat has shape {theta_hat.shape}, expected {(N, cfg.K)}"
        )
    theta_hat = theta_hat - theta_hat[:, :1]

    tau = np.asarray(guess.tau, dtype=float)
    if (tau <= TAU_FLOOR).any():
        logger.warning(
            "Non-positive smoothing scale guesses clamped",
            groups=int((tau <= TAU_FLOOR).sum()),
            floor=TAU_FLOOR,
        )
        tau = np.maximum(tau, TAU_FLOOR)

    latent_blocks = _latent_blocks(guess, cfg)
    eta_free = np.zeros((N, cfg.r - 1))
    if cfg.r > 1:
        means = free_coefficient_means(decode_latent(latent_blocks, cfg), cfg)
        eta_free = (theta_hat[:, 1 : cfg.r] - means) / tau[:, None]
    eta_rw = finite_difference(theta_hat, cfg.r) / tau[:, None]

    blocks = {
        "eta_free": eta_free,
        "eta_rw": eta_rw,
        "log_tau": np.log(tau),
        **latent_blocks,
        **(regression or default_regression_block(cfg.has_scalar_covariate, cfg.K)),
    }
    return ParameterState.from_blocks(blocks)
