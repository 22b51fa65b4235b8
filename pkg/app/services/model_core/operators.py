"""
Finite-difference operators and their inversion.
"""

import numpy as np

from app.core.errors import InvalidOrderError
from app.services.gradient_engine import primitives as ad


def finite_difference(c, order: int) -> np.ndarray:
    """
    Order-r forward difference of a coefficient sequence.

    Args:
        c: Sequence of K values
        order: Difference order r, 1 <= r < K

    Returns:
        Array of K - r values, (Δ^r c)_j for j = 1..K-r
    """
    c = np.asarray(c, dtype=float)
    if order < 1 or order >= c.shape[-1]:
        raise InvalidOrderError(
            f"Difference order must satisfy 1 <= r < K, got r={order}, K={c.shape[-1]}"
        )
    return np.diff(c, n=order, axis=-1)


def difference_matrix(K: int, order: int) -> np.ndarray:
    """(K - r) x K matrix D with D @ c == finite_difference(c, r)."""
    if order < 1 or order >= K:
        raise InvalidOrderError(f"Difference order must satisfy 1 <= r < K, got r={order}, K={K}")
    return np.diff(np.eye(K), n=order, axis=0)


def integrate_differences(lead, increments, order: int):
    """
    Rebuild a sequence from its first `order` values and its order-r differences.

    Works along the last axis, on arrays and tape nodes alike: the result c has
    c[..., :order] == lead and Δ^order c == increments.
    """
    if order == 0:
        return increments
    first = lead[..., :1]
    lower = lead[..., 1:] - lead[..., :-1]
    differences = integrate_differences(lower, increments, order - 1)
    return ad.concatenate([first, first + ad.cumsum(differences, axis=-1)], axis=-1)
