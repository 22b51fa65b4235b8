"""
Exception hierarchy for the FRODO engine.
Each error carries the process exit code the CLI reports for it.
"""

from typing import Any, Dict, List, Optional


class FrodoError(Exception):
    """Base class for all errors raised by the engine."""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigurationError(FrodoError):
    """Invalid model, sampler or command configuration."""

    exit_code = 3


class InvalidOrderError(ConfigurationError):
    """Difference or random-walk order outside its admissible range."""


class DimensionMismatchError(ConfigurationError):
    """Array or parameter-vector dimensions do not match the configuration."""


class UnknownScenarioError(ConfigurationError):
    """Scenario identifier not in the simulation registry."""


class IncompatibleBaselineError(ConfigurationError):
    """Baseline kind cannot be used with the requested scenario."""


class DataError(FrodoError):
    """Input data is malformed or unusable."""

    exit_code = 4


class OutOfDomainError(DataError):
    """A covariate measurement falls outside the assumed density domain."""

    def __init__(self, group: int, value: float, lower: float, upper: float):
        super().__init__(
            f"Covariate value {value!r} in group {group} lies outside [{lower}, {upper}]",
            {"group": group, "value": value, "lower": lower, "upper": upper},
        )
        self.group = group
        self.value = value


class EmptyDataError(DataError):
    """No observations where at least one is required."""


class GateFailure(FrodoError):
    """Convergence diagnostics did not meet the configured thresholds."""

    exit_code = 2

    def __init__(self, failures: List[str], details: Optional[Dict[str, Any]] = None):
        super().__init__("Diagnostic gates failed: " + "; ".join(failures), details)
        self.failures = failures


class SamplerFailure(FrodoError):
    """The sampler could not produce usable draws."""


class InitializationError(FrodoError):
    """No chain start with finite log-posterior could be found."""
