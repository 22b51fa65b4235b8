import numpy as np
import pytest

from app.core.errors import ConfigurationError, EmptyDataError
from app.schemas.dataset import DomainSpec
from app.services.model_core import (
    BinnedCovariates,
    CoefficientFunction,
    center_beta,
    empirical_central_density,
    regression_mean,
)
from app.services.model_core.operators import finite_difference
from app.services.model_core.regression import (
    decode_beta0,
    decode_sigma_y,
    group_means,
    regression_log_likelihood,
)


def _binned(counts):
    counts = np.asarray(counts)
    K = counts.shape[1]
    return BinnedCovariates(counts=counts, domain=DomainSpec(a_prime=0, b_prime=1, a=0, b=1, K=K))


def test_central_density_pools_groups():
    weights = empirical_central_density(_binned([[1, 1, 0], [0, 1, 1]]), h=1 / 3)
    np.testing.assert_allclose(weights, [0.25, 0.5, 0.25])


def test_central_density_needs_data():
    with pytest.raises(EmptyDataError):
        empirical_central_density(_binned(np.zeros((2, 3))), h=1 / 3)


def test_center_beta_is_weighted_zero_and_idempotent(rng):
    weights = rng.dirichlet(np.ones(10))
    beta = CoefficientFunction(values=rng.standard_normal(10))
    centered = center_beta(beta, weights)
    assert centered.centered
    assert abs(weights @ centered.values) < 1e-10
    again = center_beta(centered, weights)
    np.testing.assert_allclose(again.values, centered.values, atol=1e-12)


def test_center_beta_checks_shapes():
    with pytest.raises(ConfigurationError):
        center_beta(CoefficientFunction(values=np.zeros(3)), np.ones(4) / 4)


def test_regression_mean_is_integral_of_step_function():
    beta = CoefficientFunction(values=np.array([1.0, -1.0, 2.0]))
    phi = np.array([0.5, 1.0, 1.5])
    h = 1 / 3
    assert regression_mean(0.2, beta, phi, h) == pytest.approx(0.2 + h * (0.5 - 1.0 + 3.0))
    assert regression_mean(0.2, beta, phi, h, beta_z=2.0, z_i=0.5) == pytest.approx(
        1.2 + h * 2.5
    )
    with pytest.raises(ConfigurationError):
        regression_mean(0.2, beta, phi, h, beta_z=2.0)


def test_group_means_vectorise_regression_mean(rng):
    cells = rng.dirichlet(np.ones(4), size=3)
    beta = rng.standard_normal(4)
    mu = group_means(0.5, beta, cells, 0.3, np.array([1.0, 0.0, -1.0]))
    h = 0.25
    for i in range(3):
        single = regression_mean(
            0.5, CoefficientFunction(values=beta), cells[i] / h, h, 0.3, [1.0, 0.0, -1.0][i]
        )
        assert mu[i] == pytest.approx(single)


def test_sigma_y_start_decodes_to_one():
    blocks = {"log_sigma_y_z": 0.5 * np.log(2.0), "log_sigma_y_g": 0.0}
    assert decode_sigma_y(blocks) == pytest.approx(1.0)


def test_decode_beta0_structure(rng):
    blocks = {
        "beta0_free": 0.3,
        "beta0_rw": rng.standard_normal(6),
        "log_tau_beta": np.log(0.4),
    }
    h, sigma_y = 0.5, 1.5
    beta0 = decode_beta0(blocks, h, sigma_y)
    assert beta0.shape == (8,)
    assert beta0[0] == 0.0
    assert beta0[1] == pytest.approx(20 * h * sigma_y * 0.3)
    np.testing.assert_allclose(
        finite_difference(beta0, 2), 0.4 * sigma_y * blocks["beta0_rw"], atol=1e-12
    )


def test_full_likelihood_adds_gaussian_constants():
    y = np.array([0.1, -0.3])
    mu = np.zeros(2)
    partial = regression_log_likelihood(mu, y, 0.7)
    full = regression_log_likelihood(mu, y, 0.7, full=True)
    assert full - partial == pytest.approx(-np.log(2 * np.pi))
