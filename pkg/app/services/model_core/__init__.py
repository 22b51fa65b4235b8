"""
FRODO model core: domain types, difference operators, density and regression
blocks and the prior stack. The joint target lives in model_core.posterior.
"""

from app.services.model_core.state import (
    BinnedCovariates,
    CoefficientFunction,
    DensityCoefficients,
    ParameterState,
    Responses,
)
from app.services.model_core.operators import finite_difference, integrate_differences
from app.services.model_core.density import (
    decode_theta,
    density_coefficients,
    log_multinomial_coefficient,
    multinomial_loglik,
)
from app.services.model_core.regression import (
    center_beta,
    empirical_central_density,
    regression_mean,
)
from app.services.model_core.priors import log_prior, log_prior_components

__all__ = [
    "BinnedCovariates",
    "CoefficientFunction",
    "DensityCoefficients",
    "ParameterState",
    "Responses",
    "finite_difference",
    "integrate_differences",
    "decode_theta",
    "density_coefficients",
    "log_multinomial_coefficient",
    "multinomial_loglik",
    "center_beta",
    "empirical_central_density",
    "regression_mean",
    "log_prior",
    "log_prior_components",
]
