"""
Simulation designs and data generators.
"""

from app.services.simulators.scenarios import SCENARIOS, get_design, scenario_spec
from app.services.simulators.generate import (
    expected_response,
    simulate,
    true_beta,
    true_density,
)
from app.services.simulators.defaults import DEFAULTS, default_config_for, domain_bounds

__all__ = [
    "SCENARIOS",
    "get_design",
    "scenario_spec",
    "expected_response",
    "simulate",
    "true_beta",
    "true_density",
    "DEFAULTS",
    "default_config_for",
    "domain_bounds",
]
