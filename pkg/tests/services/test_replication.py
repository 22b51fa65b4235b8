"""
Simulation-study replications. Minutes each; run with --runslow.
"""

import numpy as np
import pytest

from app.models.enums import BaselineKind, ScenarioId
from app.schemas.config import FlatFitConfig
from app.schemas.scenario import BaselineSpec
from app.services.pipeline import fit_frodo, run_baseline
from app.services.simulators import scenario_spec, simulate

pytestmark = pytest.mark.slow

SEED = 20240601


def _sigma(run):
    return run.fit.summary.get("sigma_y").mean


def _baseline(dataset, kind, scenario):
    return run_baseline(dataset, BaselineSpec(kind=kind, scenario=scenario), workers=1)


def _assert_gates(run):
    gates = run.fit.gates
    assert gates.divergences == 0
    assert gates.max_rhat <= 1.01
    assert gates.min_ess >= 400


@pytest.fixture(scope="module")
def gauss_linear_small():
    dataset, truth = simulate(scenario_spec(ScenarioId.GAUSS_LINEAR, seed=SEED, n_groups=120))
    return dataset, truth, fit_frodo(dataset, truth, FlatFitConfig(seed=SEED), workers=1)


def test_gauss_linear_reduced(gauss_linear_small):
    dataset, _, frodo = gauss_linear_small
    naive = _baseline(dataset, BaselineKind.NAIVE_LINEAR, ScenarioId.GAUSS_LINEAR)
    assert _sigma(frodo) == pytest.approx(0.5, abs=0.09)
    assert abs(_sigma(frodo) - 0.5) < abs(_sigma(naive) - 0.5)


def test_gauss_linear_full_scale():
    dataset, truth = simulate(scenario_spec(ScenarioId.GAUSS_LINEAR, seed=SEED))
    frodo = fit_frodo(dataset, truth, FlatFitConfig(seed=SEED), workers=1)
    naive = _baseline(dataset, BaselineKind.NAIVE_LINEAR, ScenarioId.GAUSS_LINEAR)
    _assert_gates(frodo)
    assert _sigma(frodo) == pytest.approx(0.5, abs=0.06)
    assert _sigma(naive) > 0.52
    assert abs(_sigma(frodo) - 0.5) < abs(_sigma(naive) - 0.5)
    assert frodo.secant_slope == pytest.approx(0.4, abs=0.06)


def test_naive_slope_is_attenuated(gauss_linear_small):
    dataset, _, _ = gauss_linear_small
    naive = _baseline(dataset, BaselineKind.NAIVE_LINEAR, ScenarioId.GAUSS_LINEAR)
    hierarchical = _baseline(dataset, BaselineKind.HIERARCHICAL, ScenarioId.GAUSS_LINEAR)
    naive_slope = naive.fit.summary.get("beta").mean
    assert abs(naive_slope) < abs(hierarchical.fit.summary.get("beta").mean)


def test_exp_linear():
    dataset, truth = simulate(scenario_spec(ScenarioId.EXP_LINEAR, seed=SEED))
    frodo = fit_frodo(dataset, truth, FlatFitConfig(seed=SEED), workers=1)
    naive = _baseline(dataset, BaselineKind.NAIVE_LINEAR, ScenarioId.EXP_LINEAR)
    _assert_gates(frodo)
    assert _sigma(frodo) == pytest.approx(0.1, abs=0.04)
    assert _sigma(naive) > 0.14


def test_gauss_quadratic_direction():
    dataset, truth = simulate(
        scenario_spec(ScenarioId.GAUSS_QUADRATIC, seed=SEED, n_groups=150)
    )
    frodo = fit_frodo(dataset, truth, FlatFitConfig(seed=SEED), workers=1)
    gam = _baseline(dataset, BaselineKind.NAIVE_GAM, ScenarioId.GAUSS_QUADRATIC)
    _assert_gates(frodo)
    assert _sigma(gam) > 0.75
    assert _sigma(frodo) == pytest.approx(0.5, abs=0.12)


@pytest.mark.parametrize("scenario", [ScenarioId.BETA_LINEAR, ScenarioId.BETA_QUADRATIC])
def test_beta_band_covers_truth(scenario):
    dataset, truth = simulate(scenario_spec(scenario, seed=SEED))
    frodo = fit_frodo(dataset, truth, FlatFitConfig(seed=SEED), workers=1)
    _assert_gates(frodo)
    band = frodo.beta_band
    supported = band[band["mass"] >= 0.01]
    covered = (supported["lo"] <= supported["true"]) & (supported["true"] <= supported["hi"])
    assert covered.mean() >= 0.8

    naive_kind = (
        BaselineKind.NAIVE_LINEAR
        if scenario == ScenarioId.BETA_LINEAR
        else BaselineKind.NAIVE_TRANSFORMED
    )
    naive = _baseline(dataset, naive_kind, scenario)
    sigma_y = truth.sigma_y
    if scenario == ScenarioId.BETA_LINEAR:
        assert abs(_sigma(frodo) - sigma_y) < abs(_sigma(naive) - sigma_y)
    else:
        hierarchical = _baseline(dataset, BaselineKind.HIERARCHICAL, scenario)
        for run in (frodo, naive, hierarchical):
            assert _sigma(run) == pytest.approx(sigma_y, abs=0.02)


def test_croon_scalar_covariate():
    dataset, truth = simulate(scenario_spec(ScenarioId.CROON, seed=SEED))
    frodo = fit_frodo(dataset, truth, FlatFitConfig(seed=SEED), workers=1)
    _assert_gates(frodo)
    assert "beta_z" in frodo.fit.decoded
    naive = _sigma(_baseline(dataset, BaselineKind.NAIVE_LINEAR, ScenarioId.CROON))
    hierarchical = _sigma(_baseline(dataset, BaselineKind.HIERARCHICAL, ScenarioId.CROON))
    lo, hi = sorted((naive, hierarchical))
    value = _sigma(frodo)
    assert lo <= value <= hi or min(abs(value - naive), abs(value - hierarchical)) <= 0.03
    assert np.isfinite(frodo.secant_slope)
