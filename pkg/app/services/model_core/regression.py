"""
Regression block: the coefficient function beta, its centering against the
pooled covariate histogram, and the Gaussian response likelihood.
"""

from typing import Optional

import numpy as np

from app.core.errors import ConfigurationError, EmptyDataError
from app.services.gradient_engine import primitives as ad
from app.services.model_core.distributions import LOG_2, LOG_2PI
from app.services.model_core.operators import integrate_differences
from app.services.model_core.state import BinnedCovariates, CoefficientFunction

# prior scale multiplier shared by alpha, beta0_2 and beta_z
DIFFUSE_SCALE = 20.0


def empirical_central_density(binned: BinnedCovariates, h: float) -> np.ndarray:
    """
    Bin weights of the pooled covariate histogram.

    Args:
        binned: Bin counts of all groups
        h: Bin width

    Returns:
        Weights w_k = sum_i m_ik / sum_il m_il summing to one. The density
        height on bin k is w_k / h; centering uses the weights directly.
    """
    total = binned.total
    if total <= 0:
        raise EmptyDataError("No covariate measurements to build the central density from")
    return binned.counts.sum(axis=0) / float(total)


def center(beta0, weights: np.ndarray):
    """beta0 - sum_j w_j beta0_j, for arrays or tape nodes."""
    return beta0 - weights @ beta0


def center_beta(beta0: CoefficientFunction, central_weights) -> CoefficientFunction:
    """
    Impose E[beta(X)] = 0 under the central density.

    Centering an already centered function changes it only by rounding.
    """
    weights = np.asarray(central_weights, dtype=float)
    values = np.asarray(beta0.values, dtype=float)
    if weights.shape != values.shape:
        raise ConfigurationError(
            f"Weights of shape {weights.shape} do not match beta of shape {values.shape}"
        )
    return CoefficientFunction(values=center(values, weights), centered=True)


def decode_sigma_y(blocks):
    """sigma_Y = (1/sqrt 2) * z / sqrt(g), assembled on the log scale."""
    return ad.exp(blocks["log_sigma_y_z"] - 0.5 * blocks["log_sigma_y_g"] - 0.5 * LOG_2)


def decode_beta0(blocks, h: float, sigma_y):
    """
    Uncentered coefficient function beta0 with beta0_1 = 0.

    beta0_2 = 20 h sigma_Y * beta0_free and the second differences are
    tau_beta sigma_Y * beta0_rw.
    """
    second = ad.reshape(DIFFUSE_SCALE * h * sigma_y * blocks["beta0_free"], (1,))
    lead = ad.concatenate([np.zeros(1), second], axis=-1)
    increments = ad.exp(blocks["log_tau_beta"]) * sigma_y * blocks["beta0_rw"]
    return integrate_differences(lead, increments, 2)


def regression_mean(
    alpha: float,
    beta: CoefficientFunction,
    phi_i,
    h: float,
    beta_z: Optional[float] = None,
    z_i: Optional[float] = None,
) -> float:
    """
    alpha + integral of beta * f_i, which for step functions is h * sum_k beta_k phi_ik.

    Raises:
        ConfigurationError: exactly one of beta_z and z_i is given
    """
    if (beta_z is None) != (z_i is None):
        raise ConfigurationError("beta_z and z_i must be given together")
    mean = alpha + h * float(np.dot(np.asarray(beta.values), np.asarray(phi_i)))
    if beta_z is not None:
        mean += beta_z * z_i
    return float(mean)


def group_means(alpha, beta, cell_probabilities, beta_z=None, z=None):
    """Vectorised regression means over groups from cell probabilities h * phi."""
    mu = alpha + cell_probabilities @ beta
    if beta_z is not None:
        mu = mu + beta_z * z
    return mu


def regression_log_likelihood(mu, y, sigma_y, full: bool = False):
    """
    sum_i log N(y_i | mu_i, sigma_Y).

    Without `full`, the -1/2 log 2pi per group is left out.
    """
    n = int(np.size(y))
    residual = (y - mu) / sigma_y
    value = -0.5 * ad.sum(ad.square(residual)) - n * ad.log(sigma_y)
    if full:
        value = value - 0.5 * n * LOG_2PI
    return value
