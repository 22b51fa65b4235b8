import numpy as np
import pytest

from app.services.gradient_engine import primitives as ad
from app.services.gradient_engine import gradient_check, numerical_gradient, value_and_grad
from app.services.gradient_engine.tape import Tape


def test_plain_arrays_are_not_recorded():
    out = ad.exp(np.array([0.0, 1.0]))
    assert isinstance(out, np.ndarray)
    np.testing.assert_allclose(out, [1.0, np.e])


def test_quadratic_gradient():
    value, grad = value_and_grad(lambda q: -0.5 * ad.sum(ad.square(q)), np.array([1.0, -2.0, 3.0]))
    assert value == pytest.approx(-7.0)
    np.testing.assert_allclose(grad, [-1.0, 2.0, -3.0])


def test_constant_target_has_zero_gradient():
    value, grad = value_and_grad(lambda q: 3.0, np.ones(4))
    assert value == 3.0
    np.testing.assert_array_equal(grad, np.zeros(4))


def test_non_finite_value_returns_zero_gradient():
    value, grad = value_and_grad(lambda q: ad.sum(ad.log(q)), np.array([1.0, -1.0]))
    assert not np.isfinite(value)
    np.testing.assert_array_equal(grad, np.zeros(2))


def test_reused_node_accumulates_adjoints():
    def target(q):
        x = q[0]
        return x * x * x + 2.0 * x

    _, grad = value_and_grad(target, np.array([2.0]))
    assert grad[0] == pytest.approx(14.0)


PRIMITIVE_TARGETS = {
    "arithmetic": lambda q: ad.sum((q * 2.0 - 1.0) / (1.5 + ad.square(q)) + 3.0 / (2.0 + q * q)),
    "power_sqrt": lambda q: ad.sum(ad.power(ad.exp(q), 1.5) + ad.sqrt(1.0 + ad.square(q))),
    "softplus_expit": lambda q: ad.sum(ad.softplus(q) * ad.expit(-q)),
    "gammaln": lambda q: ad.sum(ad.gammaln(ad.exp(q) + 0.5)),
    "xlogy": lambda q: ad.sum(ad.xlogy(np.array([0.0, 1.0, 2.0, 3.0, 0.5]), ad.exp(q))),
    "logsumexp": lambda q: ad.logsumexp(q, axis=-1),
    "log_softmax": lambda q: ad.sum(np.arange(5.0) * ad.log_softmax(q)),
    "softmax": lambda q: ad.sum(np.arange(5.0) ** 2 * ad.softmax(q)),
    "cumsum_concat": lambda q: ad.sum(
        ad.square(ad.concatenate([np.zeros(1), ad.cumsum(q, axis=-1)], axis=-1))
    ),
    "indexing": lambda q: q[1] * q[3] + ad.sum(ad.square(q[np.array([0, 0, 4])])),
    "reshape_matmul": lambda q: ad.sum(
        ad.reshape(q[:4], (2, 2)) @ np.array([[1.0, 2.0], [3.0, 4.0]]) @ q[3:5]
    ),
    "broadcast": lambda q: ad.sum(ad.reshape(q[:2], (2, 1)) * np.ones((2, 3)) * q[2]),
    "negative": lambda q: -ad.sum(ad.exp(-q)),
}


@pytest.mark.parametrize("name", sorted(PRIMITIVE_TARGETS))
def test_primitive_gradients_match_central_differences(name, rng):
    target = PRIMITIVE_TARGETS[name]
    q = 0.7 * rng.standard_normal(5)
    check = gradient_check(target, q)
    assert check.passed, (name, check.max_relative_error)


def test_taped_and_plain_values_agree(rng):
    q = rng.standard_normal(5)
    for target in PRIMITIVE_TARGETS.values():
        value, _ = value_and_grad(target, q)
        assert value == float(target(q))


def test_numerical_gradient_of_linear_function():
    grad = numerical_gradient(lambda q: float(np.dot([1.0, -2.0], q)), np.zeros(2))
    np.testing.assert_allclose(grad, [1.0, -2.0], atol=1e-9)


def test_tape_records_one_entry_per_primitive():
    tape = Tape()
    x = tape.variable(np.ones(3))
    ad.sum(ad.exp(x) * 2.0)
    assert len(tape) == 4
