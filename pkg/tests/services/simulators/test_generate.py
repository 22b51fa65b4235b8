import numpy as np
import pytest
from scipy import integrate

from app.core.errors import ConfigurationError, UnknownScenarioError
from app.models.enums import DomainRule, ScenarioId
from app.services.pipeline import standardization_info
from app.services.simulators import (
    default_config_for,
    domain_bounds,
    expected_response,
    scenario_spec,
    simulate,
    true_beta,
    true_density,
)

ALL_SCENARIOS = list(ScenarioId)


@pytest.mark.parametrize("scenario", ALL_SCENARIOS)
def test_same_seed_same_dataset(scenario):
    spec = scenario_spec(scenario, seed=7, n_groups=12)
    first, truth_a = simulate(spec)
    second, truth_b = simulate(spec)
    assert first == second
    assert truth_a == truth_b
    other, _ = simulate(scenario_spec(scenario, seed=8, n_groups=12))
    assert other != first


@pytest.mark.parametrize(
    "scenario, n_groups, size",
    [
        (ScenarioId.GAUSS_LINEAR, 275, 20),
        (ScenarioId.GAUSS_QUADRATIC, 275, 50),
        (ScenarioId.EXP_LINEAR, 200, 50),
        (ScenarioId.BETA_LINEAR, 250, 15),
        (ScenarioId.BETA_QUADRATIC, 250, 60),
    ],
)
def test_design_sizes(scenario, n_groups, size):
    dataset, truth = simulate(scenario_spec(scenario, seed=1))
    assert dataset.n_groups == n_groups
    assert set(dataset.group_sizes.tolist()) == {size}
    assert len(truth.latent) == n_groups


def test_croon_design():
    dataset, truth = simulate(scenario_spec(ScenarioId.CROON, seed=3))
    sizes = dataset.group_sizes
    assert dataset.n_groups == 100
    assert set(sizes.tolist()) <= {10, 40}
    assert 25 < np.sum(sizes == 10) < 75
    assert dataset.has_scalar_covariate
    assert truth.beta_z == pytest.approx(0.3)
    assert truth.notes


@pytest.mark.parametrize(
    "scenario, support",
    [
        (ScenarioId.EXP_LINEAR, (0.0, np.inf)),
        (ScenarioId.BETA_LINEAR, (0.0, 1.0)),
        (ScenarioId.BETA_QUADRATIC, (0.0, 1.0)),
    ],
)
def test_covariates_respect_support(scenario, support):
    dataset, _ = simulate(scenario_spec(scenario, seed=2, n_groups=20))
    x = dataset.pooled_covariates()
    assert x.min() >= support[0] and x.max() <= support[1]


def test_beta_latent_mesh():
    _, truth = simulate(scenario_spec(ScenarioId.BETA_LINEAR, n_groups=9))
    np.testing.assert_allclose(truth.latent, np.linspace(0.1, 0.9, 9))


def test_noise_free_mode():
    dataset, truth = simulate(scenario_spec(ScenarioId.GAUSS_LINEAR, seed=4, n_groups=5, noise_free=True))
    for group, xi in zip(dataset.groups, truth.latent):
        np.testing.assert_allclose(group.x, xi)
    np.testing.assert_allclose(dataset.y, truth.expected_response)


def test_expected_response_oracles():
    spec = scenario_spec(ScenarioId.BETA_QUADRATIC)
    assert expected_response(spec, np.array([2.0]))[0] - 0.7 == pytest.approx(1.2)
    spec = scenario_spec(ScenarioId.EXP_LINEAR)
    assert expected_response(spec, np.array([2.0]))[0] == pytest.approx(0.1 - 0.9 / 2.0)
    spec = scenario_spec(ScenarioId.GAUSS_QUADRATIC)
    assert expected_response(spec, np.array([1.0]))[0] == pytest.approx(0.3 + 0.4 * 10.0)


def test_beta_quadratic_moment(rng):
    xi = 1.5
    x = rng.beta(xi, xi, size=1_000_000)
    values = 4.0 * (x - 0.5) ** 2
    se = values.std() / np.sqrt(values.size)
    assert abs(values.mean() - 1.0 / (2.0 * xi + 1.0)) < 3 * se


@pytest.mark.parametrize("scenario", ALL_SCENARIOS)
def test_true_density_integrates_to_one(scenario):
    _, truth = simulate(scenario_spec(scenario, seed=5, n_groups=6))
    lower, upper = {
        ScenarioId.EXP_LINEAR: (0.0, np.inf),
        ScenarioId.BETA_LINEAR: (0.0, 1.0),
        ScenarioId.BETA_QUADRATIC: (0.0, 1.0),
    }.get(scenario, (-np.inf, np.inf))
    group = 3
    total, _ = integrate.quad(lambda v: float(true_density(truth, group, v)), lower, upper, limit=200)
    assert total == pytest.approx(1.0, abs=1e-4)


def test_true_beta_shapes():
    _, truth = simulate(scenario_spec(ScenarioId.BETA_QUADRATIC, n_groups=4))
    np.testing.assert_allclose(true_beta(truth, [0.0, 0.5, 1.0]), [1.0, 0.0, 1.0])


def test_unknown_scenario_and_parameter():
    with pytest.raises(UnknownScenarioError):
        scenario_spec("gauss_cubic")
    with pytest.raises(UnknownScenarioError):
        scenario_spec(ScenarioId.GAUSS_LINEAR, lambda_rate=2.0)
    with pytest.raises(ConfigurationError):
        scenario_spec(ScenarioId.GAUSS_LINEAR, sigma_y=-1.0)


def test_domain_rules():
    x = [1.0, 3.0, 5.0]
    assert domain_bounds(DomainRule.UNIT_INTERVAL, x) == (0.0, 1.0)
    assert domain_bounds(DomainRule.ZERO_TO_MAX, x) == (0.0, 5.0)
    assert domain_bounds(DomainRule.OBSERVED_RANGE, x) == (1.0, 5.0)
    lo, hi = domain_bounds(DomainRule.PAD, x)
    assert lo == pytest.approx(1.0 - 0.02) and hi == pytest.approx(5.0 + 0.02)


def test_default_config_for_croon():
    spec = scenario_spec(ScenarioId.CROON, seed=9)
    dataset, _ = simulate(spec)
    info = standardization_info(dataset)
    cfg = default_config_for(spec, dataset, info)
    assert (cfg.r, cfg.K) == (3, 10)
    assert cfg.has_scalar_covariate
    small = dataset.group_sizes == 10
    np.testing.assert_allclose(np.asarray(cfg.delta)[small], 0.05)
    np.testing.assert_allclose(np.asarray(cfg.delta)[~small], 0.1)
    assert cfg.domain.a_prime == pytest.approx(dataset.pooled_covariates().min())
    assert cfg.sampler.target_accept == pytest.approx(0.985)
