import numpy as np
import pytest
from scipy import stats

from app.core.errors import DimensionMismatchError, IncompatibleBaselineError
from app.models.enums import BaselineKind, ScenarioId
from app.schemas.config import SamplerSettings
from app.schemas.scenario import BaselineSpec
from app.services.baselines import (
    HierarchicalRegression,
    NaiveRegression,
    build_baseline,
    derived_covariate,
)
from app.services.gradient_engine.checks import gradient_check
from app.services.pipeline import standardize
from app.services.sampler import run_chain
from app.services.simulators import scenario_spec, simulate


def _data(scenario, n_groups=8, group_size=6, seed=4):
    dataset, truth = simulate(scenario_spec(scenario, seed=seed, n_groups=n_groups, group_size=group_size))
    return dataset, truth


def _perturbed_start(model, rng, scale=0.1):
    return model.initial_point() + scale * rng.standard_normal(model.dimension)


@pytest.mark.parametrize("scenario", list(ScenarioId))
def test_hierarchical_gradients(scenario, rng):
    dataset, _ = _data(scenario)
    model = HierarchicalRegression(scenario, dataset.covariates(), dataset.y, dataset.z)
    q = _perturbed_start(model, rng)
    check = gradient_check(model._target, q)
    assert check.passed, check.max_relative_error


@pytest.mark.parametrize(
    "kind, scenario",
    [
        (BaselineKind.NAIVE_LINEAR, ScenarioId.GAUSS_LINEAR),
        (BaselineKind.NAIVE_LINEAR, ScenarioId.CROON),
        (BaselineKind.NAIVE_GAM, ScenarioId.GAUSS_QUADRATIC),
        (BaselineKind.NAIVE_TRANSFORMED, ScenarioId.BETA_QUADRATIC),
    ],
)
def test_naive_gradients(kind, scenario, rng):
    dataset, _ = _data(scenario, n_groups=30)
    model = build_baseline(BaselineSpec(kind=kind, scenario=scenario), dataset)
    assert isinstance(model, NaiveRegression)
    check = gradient_check(model._target, _perturbed_start(model, rng))
    assert check.passed, check.max_relative_error


def _with_blocks(model, **updates):
    blocks = model.layout.split(model.initial_point())
    blocks = {name: np.array(value, dtype=float) for name, value in blocks.items()}
    blocks.update({name: np.asarray(value, dtype=float) for name, value in updates.items()})
    return model.layout.pack(blocks)


def _latent_oracle(scenario, samples, blocks):
    """Latent-prior plus covariate log-likelihood via scipy, on the model's free coordinates."""
    if scenario == ScenarioId.GAUSS_LINEAR:
        scale = np.concatenate(samples).std(ddof=1)
        sigma_xi = np.exp(blocks["log_sigma_xi"])
        sigma_x = np.exp(blocks["log_sigma_x"])
        xi = blocks["mu_xi"] + sigma_xi * blocks["xi_raw"]
        total = stats.norm.logpdf(blocks["xi_raw"]).sum()
        total += stats.halfnorm.logpdf(sigma_x, scale=2.0 * scale) + blocks["log_sigma_x"]
        return total + sum(stats.norm.logpdf(x, v, sigma_x).sum() for x, v in zip(samples, xi))
    if scenario == ScenarioId.EXP_LINEAR:
        lam = np.exp(blocks["log_lambda"])
        shape = np.exp(blocks["log_alpha_lambda"])
        mean = np.exp(blocks["log_mu_lambda"])
        total = np.sum(stats.gamma.logpdf(lam, shape, scale=mean / shape) + blocks["log_lambda"])
        return total + sum(stats.expon.logpdf(x, scale=1.0 / v).sum() for x, v in zip(samples, lam))
    if scenario == ScenarioId.BETA_LINEAR:
        xi = 1.0 / (1.0 + np.exp(-blocks["logit_xi"]))
        total = np.sum(np.log(xi * (1.0 - xi)))
        return total + sum(stats.beta.logpdf(x, v, 1.0 - v).sum() for x, v in zip(samples, xi))
    xi = np.exp(blocks["log_xi"])
    total = stats.norm.logpdf(blocks["log_xi"]).sum()
    return total + sum(stats.beta.logpdf(x, v, v).sum() for x, v in zip(samples, xi))


@pytest.mark.parametrize(
    "scenario, block",
    [
        (ScenarioId.GAUSS_LINEAR, "xi_raw"),
        (ScenarioId.GAUSS_LINEAR, "log_sigma_x"),
        (ScenarioId.EXP_LINEAR, "log_lambda"),
        (ScenarioId.BETA_LINEAR, "logit_xi"),
        (ScenarioId.BETA_QUADRATIC, "log_xi"),
    ],
)
def test_hierarchical_density_differences_match_scipy(scenario, block, rng):
    dataset, _ = _data(scenario)
    samples = dataset.covariates()
    if scenario in (ScenarioId.BETA_LINEAR, ScenarioId.BETA_QUADRATIC):
        # draws that round to exactly 0 or 1 have no finite Beta log-density
        samples = [np.clip(x, 1e-9, 1.0 - 1e-9) for x in samples]
    model = HierarchicalRegression(scenario, samples, dataset.y, dataset.z)
    start = model.layout.split(model.initial_point())
    moved = np.asarray(start[block], dtype=float) + 0.2 * rng.standard_normal(np.shape(start[block]))
    # beta_raw = 0 keeps the response term independent of the latent values
    q0 = _with_blocks(model, beta_raw=0.0)
    q1 = _with_blocks(model, beta_raw=0.0, **{block: moved})
    expected = _latent_oracle(scenario, samples, model.layout.split(q1)) - _latent_oracle(
        scenario, samples, model.layout.split(q0)
    )
    assert model.log_density(q1) - model.log_density(q0) == pytest.approx(expected, rel=1e-8, abs=1e-8)


def test_hierarchical_transform_reports_latent_family():
    dataset, _ = _data(ScenarioId.EXP_LINEAR)
    model = HierarchicalRegression(ScenarioId.EXP_LINEAR, dataset.covariates(), dataset.y)
    out = model.transform(model.initial_point())
    assert out["lambda"].shape == (8,)
    assert np.all(out["lambda"] > 0)
    assert float(out["sigma_y"]) == pytest.approx(1.0)
    assert model.kinds["beta"].value == "coef"


def test_hierarchical_size_mismatch():
    with pytest.raises(DimensionMismatchError):
        HierarchicalRegression(ScenarioId.GAUSS_LINEAR, [np.ones(3)] * 3, np.zeros(4))


def test_derived_covariates():
    samples = [np.array([0.0, 1.0]), np.array([0.5, 0.5])]
    np.testing.assert_allclose(derived_covariate(BaselineKind.NAIVE_LINEAR, samples), [0.5, 0.5])
    np.testing.assert_allclose(derived_covariate(BaselineKind.NAIVE_TRANSFORMED, samples), [0.25, 0.0])


def test_incompatible_baseline():
    with pytest.raises(IncompatibleBaselineError):
        BaselineSpec(kind=BaselineKind.NAIVE_GAM, scenario=ScenarioId.GAUSS_LINEAR)


def test_gam_curve_is_centered_on_the_grid(rng):
    dataset, _ = _data(ScenarioId.GAUSS_QUADRATIC, n_groups=30)
    model = build_baseline(
        BaselineSpec(kind=BaselineKind.NAIVE_GAM, scenario=ScenarioId.GAUSS_QUADRATIC), dataset
    )
    out = model.transform(_perturbed_start(model, rng, scale=0.5))
    assert out["curve"].shape == (50,)
    assert out["mu"].shape == (30,)


def test_naive_slope_matches_least_squares():
    dataset, _ = _data(ScenarioId.GAUSS_LINEAR, n_groups=40, group_size=20, seed=12)
    standardized, _ = standardize(dataset)
    w = derived_covariate(BaselineKind.NAIVE_LINEAR, standardized.covariates())
    model = NaiveRegression(BaselineKind.NAIVE_LINEAR, w, standardized.y)
    settings = SamplerSettings(chains=1, warmup=300, sampling=600, seed=1, target_accept=0.8)
    output = run_chain(model, model.initial_point(), settings, chain=0)

    fit = stats.linregress(w, standardized.y)
    assert float(np.mean(output.decoded["beta"])) == pytest.approx(fit.slope, abs=3 * fit.stderr)
    assert float(np.mean(output.decoded["alpha"])) == pytest.approx(fit.intercept, abs=3 * fit.intercept_stderr + 0.05)
