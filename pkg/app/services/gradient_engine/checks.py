"""
Finite-difference oracles for the reverse-mode gradients.
"""

from typing import Callable, NamedTuple

import numpy as np

from app.services.gradient_engine.autodiff import value_and_grad


class GradientCheck(NamedTuple):
    value: float
    analytic: np.ndarray
    numeric: np.ndarray
    max_relative_error: float
    passed: bool


def numerical_gradient(target: Callable, q, step: float = 1e-5) -> np.ndarray:
    """Central differences, one coordinate at a time."""
    q = np.asarray(q, dtype=float)
    grad = np.empty_like(q)
    for i in range(q.size):
        up = q.copy()
        down = q.copy()
        up[i] += step
        down[i] -= step
        grad[i] = (float(target(up)) - float(target(down))) / (2.0 * step)
    return grad


def gradient_check(
    target: Callable,
    q,
    step: float = 1e-5,
    rtol: float = 1e-6,
    atol: float = 1e-8,
) -> GradientCheck:
    """
    Compare the taped gradient against central differences.

    The absolute floor is scaled by max(1, |value|): a log-posterior of size
    10^3 carries rounding noise of that order in each difference.

    Args:
        target: Scalar function usable with plain arrays and tape nodes
        q: Point to check
        step: Finite-difference step
        rtol: Componentwise relative tolerance
        atol: Absolute floor before scaling

    Returns:
        GradientCheck with both gradients and the worst relative error
    """
    value, analytic = value_and_grad(target, q)
    numeric = numerical_gradient(target, q, step)
    floor = atol * max(1.0, abs(value))
    error = np.abs(analytic - numeric) / np.maximum(np.abs(numeric), floor / rtol)
    worst = float(np.max(error)) if error.size else 0.0
    return GradientCheck(
        value=value,
        analytic=analytic,
        numeric=numeric,
        max_relative_error=worst,
        passed=bool(worst < rtol) and not np.isnan(analytic).any(),
    )
