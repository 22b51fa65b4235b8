import numpy as np
import pytest

from app.services.sampler import leapfrog
from app.services.sampler.hamiltonian import hamiltonian, kinetic_energy, sample_momentum


def harmonic(q):
    return -0.5 * float(q @ q), -q


def test_single_leapfrog_step_on_harmonic_oscillator():
    point = leapfrog(np.array([1.0]), np.array([0.0]), 0.1, np.ones(1), harmonic)
    assert point.q[0] == pytest.approx(0.995)
    assert point.p[0] == pytest.approx(-0.09975)
    assert point.logp == pytest.approx(-0.5 * 0.995**2)


def test_leapfrog_is_reversible(rng):
    q0, p0 = rng.standard_normal(3), rng.standard_normal(3)
    inv_mass = np.array([1.0, 0.5, 2.0])
    forward = leapfrog(q0, p0, 0.2, inv_mass, harmonic)
    back = leapfrog(forward.q, forward.p, -0.2, inv_mass, harmonic)
    np.testing.assert_allclose(back.q, q0, atol=1e-12)
    np.testing.assert_allclose(back.p, p0, atol=1e-12)


def test_energy_error_is_second_order(rng):
    q, p = rng.standard_normal(2), rng.standard_normal(2)
    inv_mass = np.ones(2)
    h0 = hamiltonian(harmonic(q)[0], p, inv_mass)
    errors = []
    for eps in (0.1, 0.05):
        point = leapfrog(q, p, eps, inv_mass, harmonic)
        worst = abs(point.hamiltonian - h0)
        for _ in range(int(round(2.0 / eps)) - 1):
            point = leapfrog(point.q, point.p, eps, inv_mass, harmonic, grad=point.grad)
            worst = max(worst, abs(point.hamiltonian - h0))
        errors.append(worst)
    assert errors[1] == pytest.approx(errors[0] / 4.0, rel=0.2)


def test_nan_energy_is_infinite():
    assert hamiltonian(np.nan, np.zeros(1), np.ones(1)) == np.inf


def test_momentum_covariance_is_mass_matrix(rng):
    inv_mass = np.array([4.0, 0.25])
    draws = np.array([sample_momentum(rng, inv_mass) for _ in range(20000)])
    np.testing.assert_allclose(draws.var(axis=0), 1.0 / inv_mass, rtol=0.05)
    assert kinetic_energy(np.array([1.0, 2.0]), inv_mass) == pytest.approx(0.5 * (4.0 + 1.0))
