import numpy as np
import pytest
from scipy import optimize

from app.core.errors import InvalidOrderError
from app.services.init_strategy import fit_all, pspline_poisson_fit
from app.services.init_strategy import pspline
from app.services.init_strategy.pspline import penalty_matrix, poisson_objective


def test_equal_counts_give_a_flat_fit():
    np.testing.assert_allclose(pspline_poisson_fit(np.full(10, 7), r=3), 0.0, atol=1e-8)


def test_heavy_penalty_flattens_first_order_fit():
    counts = np.array([1, 5, 9, 3, 2, 0, 4])
    theta = pspline_poisson_fit(counts, r=1, lambda_init=1e6)
    np.testing.assert_allclose(theta, 0.0, atol=1e-3)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_matches_generic_optimizer(r):
    counts = np.array([0, 2, 6, 11, 9, 4, 1, 0, 0, 1], dtype=float)
    P = penalty_matrix(counts.size, r)

    def negative(theta):
        return -poisson_objective(theta, counts, r, 1.0)

    def gradient(theta):
        return -(counts - np.exp(theta) - P @ theta)

    def hessian(theta):
        return np.diag(np.exp(theta)) + P

    reference = optimize.minimize(
        negative,
        np.zeros(counts.size),
        jac=gradient,
        hess=hessian,
        method="trust-exact",
        options={"gtol": 1e-11},
    )
    expected = reference.x - reference.x[0]
    np.testing.assert_allclose(pspline_poisson_fit(counts, r), expected, atol=1e-5)


def test_first_coefficient_is_zero():
    theta = pspline_poisson_fit(np.array([3, 8, 2, 5, 1]), r=2)
    assert theta[0] == 0.0


def test_too_few_bins_for_order():
    with pytest.raises(InvalidOrderError):
        pspline_poisson_fit(np.ones(3), r=3)


def test_fit_all_rows():
    counts = np.array([[1, 2, 3, 4], [4, 3, 2, 1]])
    fitted = fit_all(counts, r=1)
    assert fitted.shape == (2, 4)
    np.testing.assert_allclose(fitted[0], pspline_poisson_fit(counts[0], r=1))
    assert fit_all(np.zeros((0, 4)), r=1).shape == (0, 4)


def test_stalled_line_search_stops_without_accepting_a_worse_step(monkeypatch):
    calls = []

    def worse_after_start(theta, counts, order, lambda_init):
        calls.append(np.array(theta))
        return 0.0 if len(calls) == 1 else -1.0

    monkeypatch.setattr(pspline, "poisson_objective", worse_after_start)
    theta = pspline_poisson_fit(np.array([3, 8, 1, 0, 6]), r=1)
    np.testing.assert_array_equal(theta, 0.0)
    # one initial evaluation plus a single exhausted halving sequence
    assert len(calls) == 1 + 34
