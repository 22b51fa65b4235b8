"""
Registry of the six simulation designs: group layout and true parameters.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

from app.core.errors import UnknownScenarioError
from app.models.enums import ScenarioId
from app.schemas.scenario import ScenarioSpec

# not part of the original design; recorded in every croon ground truth
CROON_BETA_Z = 0.3


@dataclass(frozen=True)
class ScenarioDesign:
    scenario: ScenarioId
    n_groups: int
    group_size: int
    params: Dict[str, float] = field(default_factory=dict)
    latent_name: str = "xi"


SCENARIOS: Dict[ScenarioId, ScenarioDesign] = {
    ScenarioId.GAUSS_LINEAR: ScenarioDesign(
        scenario=ScenarioId.GAUSS_LINEAR,
        n_groups=275,
        group_size=20,
        params={
            "mu_xi": 0.0,
            "sigma_xi": 2.0,
            "sigma_x": 3.0,
            "alpha": 0.3,
            "beta": 0.4,
            "sigma_y": 0.5,
        },
    ),
    ScenarioId.GAUSS_QUADRATIC: ScenarioDesign(
        scenario=ScenarioId.GAUSS_QUADRATIC,
        n_groups=275,
        group_size=50,
        params={
            "mu_xi": 0.0,
            "sigma_xi": 2.0,
            "sigma_x": 3.0,
            "alpha": 0.3,
            "beta": 0.4,
            "sigma_y": 0.5,
        },
    ),
    ScenarioId.EXP_LINEAR: ScenarioDesign(
        scenario=ScenarioId.EXP_LINEAR,
        n_groups=200,
        group_size=50,
        params={
            "lambda_shape": 10.0,
            "lambda_rate": 10.0,
            "alpha": 0.1,
            "beta": -0.9,
            "sigma_y": 0.1,
        },
        latent_name="lambda",
    ),
    ScenarioId.BETA_LINEAR: ScenarioDesign(
        scenario=ScenarioId.BETA_LINEAR,
        n_groups=250,
        group_size=15,
        params={"xi_min": 0.1, "xi_max": 0.9, "alpha": 0.2, "beta": 1.0, "sigma_y": 0.05},
    ),
    ScenarioId.BETA_QUADRATIC: ScenarioDesign(
        scenario=ScenarioId.BETA_QUADRATIC,
        n_groups=250,
        group_size=60,
        params={"xi_min": 0.1, "xi_max": 2.0, "alpha": 0.7, "beta": 1.0, "sigma_y": 0.1},
    ),
    ScenarioId.CROON: ScenarioDesign(
        scenario=ScenarioId.CROON,
        n_groups=100,
        group_size=40,
        params={
            "mu_xi": 0.0,
            "sigma_xi": 1.0,
            "sigma_x": 3.0,
            "alpha": 0.3,
            "beta": 0.3,
            "sigma_y": math.sqrt(0.35),
            "beta_z": CROON_BETA_Z,
            "small_size": 10.0,
            "large_size": 40.0,
            "small_probability": 0.5,
        },
    ),
}


def get_design(scenario) -> ScenarioDesign:
    try:
        return SCENARIOS[ScenarioId(scenario)]
    except ValueError:
        raise UnknownScenarioError(
            f"Unknown scenario '{scenario}'",
            {"known": [s.value for s in ScenarioId]},
        )


def scenario_spec(
    scenario,
    seed: int = 0,
    n_groups: Optional[int] = None,
    group_size: Optional[int] = None,
    noise_free: bool = False,
    **overrides: float,
) -> ScenarioSpec:
    """
    Build a ScenarioSpec from the registry, optionally shrunk or altered.

    Args:
        scenario: Scenario id (enum or string)
        seed: Seed of the simulation stream
        n_groups: Number of groups; the design's value when omitted
        group_size: Common group size; croon draws its sizes when omitted
        noise_free: Zero the within-group and response noise
        **overrides: Replacement true parameter values

    Returns:
        ScenarioSpec
    """
    design = get_design(scenario)
    unknown = set(overrides) - set(design.params)
    if unknown:
        raise UnknownScenarioError(
            f"Parameters {sorted(unknown)} do not belong to scenario {design.scenario.value}"
        )
    N = n_groups or design.n_groups
    sizes = [group_size] * N if group_size is not None else None
    if sizes is None and design.scenario != ScenarioId.CROON:
        sizes = [design.group_size] * N
    return ScenarioSpec(
        scenario=design.scenario,
        n_groups=N,
        group_sizes=sizes,
        params={**design.params, **overrides},
        seed=seed,
        noise_free=noise_free,
    )
