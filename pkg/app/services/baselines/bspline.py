"""
B-spline basis by the Cox-de Boor recursion, and equally spaced P-spline knots.
"""

import numpy as np

from app.core.errors import ConfigurationError, DataError


def pspline_knots(lo: float, hi: float, n_knots: int = 20, degree: int = 3) -> np.ndarray:
    """
    Equally spaced knots over [lo, hi], padded by `degree` knots on each side.

    Args:
        lo: Left end of the data range
        hi: Right end of the data range
        n_knots: Knots spanning [lo, hi], endpoints included
        degree: Spline degree

    Returns:
        n_knots + 2 * degree knots; the basis has n_knots + degree - 1 functions
    """
    if n_knots < 2:
        raise ConfigurationError("Need at least two knots")
    if not hi > lo:
        raise ConfigurationError(f"Knot range requires lo < hi, got [{lo}, {hi}]")
    dx = (hi - lo) / (n_knots - 1)
    return np.concatenate(
        (
            lo - dx * np.arange(degree, 0, -1),
            np.linspace(lo, hi, n_knots),
            hi + dx * np.arange(1, degree + 1),
        )
    )


def _ratio(num: np.ndarray, den: float) -> np.ndarray:
    # 0/0 is 0 for repeated knots
    if den == 0.0:
        return np.zeros_like(num)
    return num / den


def bspline_basis(x, knots, degree: int) -> np.ndarray:
    """
    Values of every B-spline basis function at x.

    Args:
        x: Scalar or array of evaluation points inside [knots[degree], knots[-degree-1]]
        knots: Non-decreasing knot sequence
        degree: Spline degree

    Returns:
        Array of shape x.shape + (len(knots) - degree - 1,)

    Raises:
        DataError: a point lies outside the span where the basis sums to one
    """
    knots = np.asarray(knots, dtype=float)
    x = np.asarray(x, dtype=float)
    n_basis = len(knots) - degree - 1
    if degree < 0 or n_basis < 1:
        raise ConfigurationError(f"{len(knots)} knots cannot carry a degree-{degree} basis")
    lo, hi = knots[degree], knots[n_basis]
    if np.any((x < lo) | (x > hi)):
        raise DataError(f"Evaluation points must lie in [{lo}, {hi}]")

    flat = x.ravel()
    # degree 0: indicators of [t_j, t_j+1); the right end of the span goes to the last piece
    basis = ((knots[:-1] <= flat[:, None]) & (flat[:, None] < knots[1:])).astype(float)
    last = np.flatnonzero(knots[:-1] < knots[1:])
    last = last[last < n_basis][-1]
    basis[flat == hi, :] = 0.0
    basis[flat == hi, last] = 1.0

    for p in range(1, degree + 1):
        width = len(knots) - p - 1
        nxt = np.zeros((flat.size, width))
        for j in range(width):
            left = _ratio((flat - knots[j]) * basis[:, j], knots[j + p] - knots[j])
            right = _ratio(
                (knots[j + p + 1] - flat) * basis[:, j + 1], knots[j + p + 1] - knots[j + 1]
            )
            nxt[:, j] = left + right
        basis = nxt
    return basis.reshape(x.shape + (n_basis,))
