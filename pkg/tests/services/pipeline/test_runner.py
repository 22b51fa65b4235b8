import numpy as np
import pytest

from app.core.errors import ConfigurationError
from app.models.enums import ScenarioId
from app.schemas.config import FlatFitConfig
from app.schemas.dataset import StandardizationInfo
from app.schemas.results import GateReport, PosteriorSummary
from app.services.pipeline import ModelFit, standardization_info
from app.services.pipeline.fitting import per_chain_notes
from app.services.pipeline.runner import band_groups, prediction_table, resolve_config
from app.services.simulators import scenario_spec, simulate


def _fake_fit(decoded, info):
    gates = GateReport(
        max_rhat=1.0, min_ess=1000.0, divergences=0,
        rhat_threshold=1.01, ess_threshold=400.0, passed=True,
    )
    empty = PosteriorSummary(parameters=[])
    return ModelFit(
        model=None, outputs=[], decoded=decoded, raw_summary=empty, summary=empty,
        gates=gates, info=info, timings=[],
    )


def test_config_without_ground_truth_needs_model_keys(toy_dataset):
    info = standardization_info(toy_dataset)
    with pytest.raises(ConfigurationError):
        resolve_config(toy_dataset, info, overrides=FlatFitConfig(r=2, K=6))

    cfg = resolve_config(
        toy_dataset,
        info,
        overrides=FlatFitConfig(r=2, K=6, a_prime=0.0, b_prime=10.0, delta=0.2, chains=2),
    )
    assert (cfg.r, cfg.K) == (2, 6)
    assert cfg.delta == [0.2, 0.2, 0.2]
    assert cfg.domain.a == pytest.approx((0.0 - info.x_mean) / info.x_sd)
    assert cfg.sampler.chains == 2


def test_scenario_defaults_with_overrides():
    dataset, truth = simulate(scenario_spec(ScenarioId.GAUSS_LINEAR, seed=2, n_groups=10))
    info = standardization_info(dataset)
    cfg = resolve_config(dataset, info, truth)
    assert (cfg.r, cfg.K) == (3, 10)
    assert cfg.sampler.target_accept == pytest.approx(0.985)

    cfg = resolve_config(dataset, info, truth, FlatFitConfig(K=12, warmup=200, seed=5))
    assert cfg.K == 12 and cfg.domain.K == 12
    assert (cfg.sampler.warmup, cfg.sampler.seed) == (200, 5)
    assert cfg.sampler.target_accept == pytest.approx(0.985)


def test_bad_overrides_are_rejected():
    dataset, truth = simulate(scenario_spec(ScenarioId.BETA_LINEAR, seed=2, n_groups=10))
    info = standardization_info(dataset)
    with pytest.raises(ConfigurationError):
        resolve_config(dataset, info, truth, FlatFitConfig(delta=[0.1, 0.2]))
    with pytest.raises(ConfigurationError):
        resolve_config(dataset, info, truth, FlatFitConfig(target_accept=1.5))


def test_prediction_table_is_on_the_original_scale(rng):
    info = StandardizationInfo(y_mean=1.0, y_sd=2.0, x_mean=0.0, x_sd=1.0)
    mu = np.broadcast_to(np.array([-1.0, 0.0, 1.0]), (4, 1000, 3)).copy()
    sigma = np.full((4, 1000), 0.05)
    table = prediction_table(_fake_fit({"mu": mu, "sigma_y": sigma}, info), np.zeros(3), info, seed=1)
    assert list(table.columns) == ["group", "y", "mu_mean", "mu_lo", "mu_hi", "pred_lo", "pred_hi"]
    np.testing.assert_allclose(table["mu_mean"], [-1.0, 1.0, 3.0])
    np.testing.assert_allclose(table["mu_lo"], table["mu_mean"])
    assert np.all(table["pred_lo"] < table["mu_mean"]) and np.all(table["mu_mean"] < table["pred_hi"])
    np.testing.assert_allclose(table["pred_hi"] - table["pred_lo"], 2 * 1.96 * 0.1, rtol=0.1)

    again = prediction_table(_fake_fit({"mu": mu, "sigma_y": sigma}, info), np.zeros(3), info, seed=1)
    np.testing.assert_array_equal(again["pred_lo"], table["pred_lo"])


def test_band_groups_pick_extremes_and_middle(toy_dataset):
    info = StandardizationInfo.identity()
    xi = np.broadcast_to(np.array([0.5, -2.0, 3.0]), (2, 10, 3)).copy()
    assert band_groups(_fake_fit({"xi": xi}, info), toy_dataset) == [1, 0, 2]
    # without a latent block the group sample means decide
    assert band_groups(_fake_fit({}, info), toy_dataset) == [0, 1, 2]


def test_stuck_chain_is_noted(rng):
    good = rng.standard_normal((3, 200))
    good[2, 100:] += 5.0
    notes = per_chain_notes({"sigma_y": good, "beta": rng.standard_normal((3, 200, 4))})
    assert notes["stuck_chains"] == [2]
    assert set(notes["per_chain_rhat"]) == {"sigma_y"}
