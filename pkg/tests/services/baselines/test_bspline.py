import numpy as np
import pytest

from app.core.errors import ConfigurationError, DataError
from app.services.baselines import bspline_basis, pspline_knots


def test_knots_are_padded_and_equally_spaced():
    knots = pspline_knots(0.0, 1.0, n_knots=11, degree=3)
    assert knots.shape == (17,)
    np.testing.assert_allclose(np.diff(knots), 0.1)
    assert knots[3] == pytest.approx(0.0) and knots[-4] == pytest.approx(1.0)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_partition_of_unity(degree):
    knots = pspline_knots(-2.0, 3.0, n_knots=8, degree=degree)
    x = np.linspace(-2.0, 3.0, 101)
    basis = bspline_basis(x, knots, degree)
    assert basis.shape == (101, 8 + degree - 1)
    np.testing.assert_allclose(basis.sum(axis=1), 1.0, atol=1e-12)
    assert basis.min() >= 0.0


def test_degree_zero_is_an_indicator():
    knots = np.array([0.0, 1.0, 2.0, 3.0])
    basis = bspline_basis([0.0, 0.5, 1.0, 2.5, 3.0], knots, 0)
    expected = [[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 1]]
    np.testing.assert_array_equal(basis, expected)


def test_degree_one_is_a_hat():
    knots = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    basis = bspline_basis([1.0, 1.5, 2.0, 2.5, 3.0], knots, 1)
    np.testing.assert_allclose(basis[:, 1], [0.0, 0.5, 1.0, 0.5, 0.0])


def test_scalar_input_keeps_shape():
    knots = pspline_knots(0.0, 1.0, n_knots=5, degree=3)
    assert bspline_basis(0.3, knots, 3).shape == (7,)


def test_out_of_span_points_are_rejected():
    knots = pspline_knots(0.0, 1.0, n_knots=5, degree=3)
    with pytest.raises(DataError):
        bspline_basis([1.5], knots, 3)


def test_bad_knot_requests():
    with pytest.raises(ConfigurationError):
        pspline_knots(1.0, 1.0)
    with pytest.raises(ConfigurationError):
        pspline_knots(0.0, 1.0, n_knots=1)
