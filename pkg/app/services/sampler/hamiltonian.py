"""
Euclidean Hamiltonian dynamics with a diagonal metric.
"""

from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np

ValueAndGrad = Callable[[np.ndarray], Tuple[float, np.ndarray]]


class PhasePoint(NamedTuple):
    """A point of the trajectory with everything the tree builder reuses."""

    q: np.ndarray
    p: np.ndarray
    p_sharp: np.ndarray
    logp: float
    grad: np.ndarray
    hamiltonian: float


def kinetic_energy(p: np.ndarray, inv_mass: np.ndarray) -> float:
    return 0.5 * float(np.dot(p, inv_mass * p))


def hamiltonian(logp: float, p: np.ndarray, inv_mass: np.ndarray) -> float:
    """-log pi(q) + kinetic energy; NaN is mapped to +inf."""
    energy = -logp + kinetic_energy(p, inv_mass)
    return np.inf if np.isnan(energy) else float(energy)


def sample_momentum(rng: np.random.Generator, inv_mass: np.ndarray) -> np.ndarray:
    """p ~ N(0, M) with M = diag(1 / inv_mass)."""
    return rng.standard_normal(inv_mass.shape[0]) / np.sqrt(inv_mass)


def phase_point(q, p, logp, grad, inv_mass) -> PhasePoint:
    return PhasePoint(
        q=q,
        p=p,
        p_sharp=inv_mass * p,
        logp=logp,
        grad=grad,
        hamiltonian=hamiltonian(logp, p, inv_mass),
    )


def leapfrog(
    q: np.ndarray,
    p: np.ndarray,
    eps: float,
    inv_mass: np.ndarray,
    value_and_grad: ValueAndGrad,
    grad: Optional[np.ndarray] = None,
) -> PhasePoint:
    """
    One half-kick, drift, half-kick step.

    Args:
        q: Position
        p: Momentum
        eps: Step size; negative values integrate backwards in time
        inv_mass: Diagonal of the inverse mass matrix
        value_and_grad: Log-density and its gradient
        grad: Gradient at q if already known

    Returns:
        PhasePoint at the end of the step; a non-finite Hamiltonian there is
        the caller's divergence signal
    """
    if grad is None:
        _, grad = value_and_grad(q)
    p_half = p + 0.5 * eps * grad
    q_new = q + eps * inv_mass * p_half
    logp, grad_new = value_and_grad(q_new)
    p_new = p_half + 0.5 * eps * grad_new
    return phase_point(q_new, p_new, logp, grad_new, inv_mass)
