"""
Data generation for the simulation designs.

Every scenario draws latent group values, group sizes, covariate samples and
responses from one generator in a fixed order, so a seed reproduces the
dataset bit for bit.
"""

from typing import List, Optional, Tuple

import numpy as np
import structlog
from scipy import stats

from app.core.errors import UnknownScenarioError
from app.models.enums import ScenarioId
from app.schemas.dataset import GroupedDataset, GroupRecord
from app.schemas.scenario import GroundTruth, ScenarioSpec
from app.services.simulators.scenarios import get_design

logger = structlog.get_logger(__name__)

GAUSSIAN_SCENARIOS = (ScenarioId.GAUSS_LINEAR, ScenarioId.GAUSS_QUADRATIC, ScenarioId.CROON)


def _group_sizes(spec: ScenarioSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.group_sizes is not None:
        return np.asarray(spec.group_sizes, dtype=int)
    p = spec.params
    small = rng.random(spec.n_groups) < p["small_probability"]
    return np.where(small, int(p["small_size"]), int(p["large_size"]))


def _latent(spec: ScenarioSpec, rng: np.random.Generator) -> np.ndarray:
    p = spec.params
    N = spec.n_groups
    if spec.scenario in GAUSSIAN_SCENARIOS:
        return p["mu_xi"] + p["sigma_xi"] * rng.standard_normal(N)
    if spec.scenario == ScenarioId.EXP_LINEAR:
        return rng.gamma(p["lambda_shape"], 1.0 / p["lambda_rate"], size=N)
    return np.linspace(p["xi_min"], p["xi_max"], N)


def _covariates(
    spec: ScenarioSpec, latent: np.ndarray, sizes: np.ndarray, rng: np.random.Generator
) -> List[np.ndarray]:
    p = spec.params
    samples = []
    for value, n in zip(latent, sizes):
        if spec.noise_free:
            samples.append(np.full(n, covariate_mean(spec.scenario, value)))
        elif spec.scenario in GAUSSIAN_SCENARIOS:
            samples.append(value + p["sigma_x"] * rng.standard_normal(n))
        elif spec.scenario == ScenarioId.EXP_LINEAR:
            samples.append(rng.exponential(1.0 / value, size=n))
        elif spec.scenario == ScenarioId.BETA_LINEAR:
            samples.append(rng.beta(value, 1.0 - value, size=n))
        else:
            samples.append(rng.beta(value, value, size=n))
    return samples


def covariate_mean(scenario: ScenarioId, latent_value: float) -> float:
    """Mean of one group's covariate distribution."""
    if scenario == ScenarioId.EXP_LINEAR:
        return 1.0 / latent_value
    if scenario == ScenarioId.BETA_QUADRATIC:
        return 0.5
    return latent_value


def expected_response(spec: ScenarioSpec, latent: np.ndarray, z: Optional[np.ndarray] = None):
    """
    E[Y_i] given the latent group values, per the scenario's regression equation.

    gauss_quadratic keeps the sigma_x^2 term, so the intercept of the
    functional form alpha + E_i[beta x^2] is exactly alpha.
    """
    p = spec.params
    alpha, beta = p["alpha"], p["beta"]
    scenario = spec.scenario
    if scenario == ScenarioId.GAUSS_QUADRATIC:
        return alpha + beta * (latent**2 + p["sigma_x"] ** 2)
    if scenario == ScenarioId.EXP_LINEAR:
        return alpha + beta / latent
    if scenario == ScenarioId.BETA_QUADRATIC:
        return alpha + beta * (1.0 + 1.0 / (2.0 * latent + 1.0))
    mean = alpha + beta * latent
    if scenario == ScenarioId.CROON:
        mean = mean + p["beta_z"] * z
    return mean


def simulate(
    spec: ScenarioSpec, rng: Optional[np.random.Generator] = None
) -> Tuple[GroupedDataset, GroundTruth]:
    """
    Simulate one dataset.

    Args:
        spec: Scenario specification
        rng: Generator to draw from; seeded from spec.seed when omitted

    Returns:
        The grouped dataset and its ground truth record
    """
    design = get_design(spec.scenario)
    rng = rng if rng is not None else np.random.default_rng(spec.seed)

    latent = _latent(spec, rng)
    sizes = _group_sizes(spec, rng)
    samples = _covariates(spec, latent, sizes, rng)
    z = rng.standard_normal(spec.n_groups) if spec.scenario == ScenarioId.CROON else None

    mean = expected_response(spec, latent, z)
    noise = np.zeros(spec.n_groups) if spec.noise_free else rng.standard_normal(spec.n_groups)
    y = mean + spec.params["sigma_y"] * noise

    groups = [
        GroupRecord(
            y=float(y[i]),
            x=samples[i].tolist(),
            z=None if z is None else float(z[i]),
        )
        for i in range(spec.n_groups)
    ]
    notes = []
    if spec.scenario == ScenarioId.CROON:
        notes.append("beta_z is chosen by this simulator; the original design does not state it")
    if spec.noise_free:
        notes.append("noise-free mode: covariates at their group means, no response noise")

    truth = GroundTruth(
        scenario=spec.scenario,
        seed=spec.seed,
        params=spec.params,
        latent_name=design.latent_name,
        latent=latent.tolist(),
        expected_response=np.asarray(mean, dtype=float).tolist(),
        sigma_y=spec.params["sigma_y"],
        beta_z=spec.params.get("beta_z"),
        notes=notes,
    )
    logger.info(
        "Simulated dataset",
        scenario=spec.scenario.value,
        seed=spec.seed,
        groups=spec.n_groups,
        measurements=int(sizes.sum()),
    )
    return GroupedDataset(groups=groups), truth


def true_beta(truth: GroundTruth, x) -> np.ndarray:
    """The true regression function beta*(x) on the original scale."""
    x = np.asarray(x, dtype=float)
    beta = truth.params["beta"]
    if truth.scenario == ScenarioId.GAUSS_QUADRATIC:
        return beta * x**2
    if truth.scenario == ScenarioId.BETA_QUADRATIC:
        return 4.0 * beta * (x - 0.5) ** 2
    return beta * x


def true_density(truth: GroundTruth, group: int, x) -> np.ndarray:
    """The true covariate density of one group at original-scale points x."""
    x = np.asarray(x, dtype=float)
    value = truth.latent[group]
    scenario = truth.scenario
    if scenario in GAUSSIAN_SCENARIOS:
        return stats.norm.pdf(x, loc=value, scale=truth.params["sigma_x"])
    if scenario == ScenarioId.EXP_LINEAR:
        return stats.expon.pdf(x, scale=1.0 / value)
    if scenario == ScenarioId.BETA_LINEAR:
        return stats.beta.pdf(x, value, 1.0 - value)
    if scenario == ScenarioId.BETA_QUADRATIC:
        return stats.beta.pdf(x, value, value)
    raise UnknownScenarioError(f"No density for scenario '{scenario}'")
