"""
Histogram density block: decoding the random-walk coefficients theta and
the multinomial likelihood of the bin counts.
"""

from typing import Mapping, Union

import numpy as np
from scipy import special

from app.core.errors import DimensionMismatchError
from app.schemas.config import ModelConfig
from app.services.gradient_engine import primitives as ad
from app.services.model_core.operators import integrate_differences
from app.services.model_core.state import DensityCoefficients, ParameterState

Blocks = Mapping[str, object]


def _blocks(state: Union[ParameterState, Blocks]) -> Blocks:
    return state.as_blocks() if isinstance(state, ParameterState) else state


def decode_latent(state: Union[ParameterState, Blocks], cfg: ModelConfig) -> dict:
    """Constrained latent quantities: xi, sigma_x, ... (r=3) or lambda, ... (r=2)."""
    blocks = _blocks(state)
    if cfg.r == 3:
        sigma_xi = ad.exp(blocks["log_sigma_xi"])
        return {
            "xi": blocks["mu_xi"] + sigma_xi * blocks["xi_raw"],
            "mu_xi": blocks["mu_xi"],
            "sigma_xi": sigma_xi,
            "sigma_x": ad.exp(blocks["log_sigma_x"]),
        }
    if cfg.r == 2:
        return {
            "lambda": ad.exp(blocks["log_lambda"]),
            "mu_lambda": ad.exp(blocks["log_mu_lambda"]),
            "alpha_lambda": ad.exp(blocks["log_alpha_lambda"]),
        }
    return {}


def free_coefficient_means(latent: dict, cfg: ModelConfig):
    """
    Prior means of the free coefficients theta_i2..theta_ir.

    r=3: the log-ratio of a N(xi_i, sigma_x) density at bin midpoints k and 1,
    h(k-1)/sigma_x^2 * (xi_i - (a + kh/2)) for k = 2, 3.
    r=2: the exponential log-slope -lambda_i * h over one bin.
    """
    h = cfg.domain.h
    a = cfg.domain.a
    if cfg.r == 3:
        k = np.array([2.0, 3.0])
        n = ad.value_of(latent["xi"]).shape[0]
        xi = ad.reshape(latent["xi"], (n, 1))
        return (h * (k - 1.0)) * (xi - (a + k * h / 2.0)) / ad.square(latent["sigma_x"])
    if cfg.r == 2:
        n = ad.value_of(latent["lambda"]).shape[0]
        return ad.reshape(-h * latent["lambda"], (n, 1))
    return None


def decode_theta(state: Union[ParameterState, Blocks], cfg: ModelConfig):
    """
    Decode the N x K log-density coefficients from the non-centered state.

    theta_i1 is fixed at 0; the next r-1 coefficients are their prior mean
    plus tau_i * eta_free; beyond that, order-r differences equal
    tau_i * eta_rw.
    """
    blocks = _blocks(state)
    eta_rw = blocks["eta_rw"]
    n_groups = ad.value_of(eta_rw).shape[0]
    expected = (n_groups, cfg.K - cfg.r)
    if ad.value_of(eta_rw).shape != expected:
        raise DimensionMismatchError(
            f"eta_rw has shape {ad.value_of(eta_rw).shape}, expected {expected}"
        )

    tau = ad.reshape(ad.exp(blocks["log_tau"]), (n_groups, 1))
    increments = tau * eta_rw
    lead = np.zeros((n_groups, 1))
    if cfg.r > 1:
        means = free_coefficient_means(decode_latent(blocks, cfg), cfg)
        lead = ad.concatenate([lead, means + tau * blocks["eta_free"]], axis=-1)
    return integrate_differences(lead, increments, cfg.r)


def density_coefficients(theta, h: float) -> DensityCoefficients:
    """phi_ik = exp(theta_ik) / (h * sum_j exp(theta_ij)), computed with max subtraction."""
    if h <= 0:
        raise DimensionMismatchError(f"Bin width must be positive, got {h}")
    theta = np.asarray(ad.value_of(theta), dtype=float)
    return DensityCoefficients(phi=special.softmax(theta, axis=-1) / h, h=h)


def multinomial_loglik(counts, phi, h: float) -> float:
    """
    sum_k m_k log(h phi_k), the multinomial log-pmf without its coefficient.

    A zero height under a positive count gives -inf.
    """
    counts = np.asarray(counts, dtype=float)
    with np.errstate(divide="ignore"):
        return float(np.sum(special.xlogy(counts, h * np.asarray(phi, dtype=float))))


def log_multinomial_coefficient(counts) -> float:
    """log(n! / prod_k m_k!), summed over rows if counts is a matrix."""
    counts = np.asarray(counts, dtype=float)
    n = counts.sum(axis=-1)
    return float(np.sum(special.gammaln(n + 1.0)) - np.sum(special.gammaln(counts + 1.0)))
