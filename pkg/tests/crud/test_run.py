import numpy as np
import pytest

from app.core.errors import DataError
from app.crud import read_draws, read_manifest, read_run, read_table, write_baseline_run
from app.models.enums import BaselineKind, ScenarioId
from app.schemas.config import SamplerSettings
from app.schemas.scenario import BaselineSpec
from app.services.pipeline import run_baseline
from app.services.simulators import scenario_spec, simulate


@pytest.fixture(scope="module")
def baseline_run():
    dataset, _ = simulate(scenario_spec(ScenarioId.GAUSS_LINEAR, seed=3, n_groups=20, group_size=10))
    spec = BaselineSpec(kind=BaselineKind.NAIVE_LINEAR, scenario=ScenarioId.GAUSS_LINEAR)
    sampler = SamplerSettings(chains=2, warmup=150, sampling=100, seed=4, target_accept=0.8)
    return run_baseline(dataset, spec, sampler, workers=1)


def test_run_directory_round_trip(tmp_path, baseline_run):
    write_baseline_run(baseline_run, tmp_path)

    record = read_run(tmp_path)
    assert record.label == "naive_linear"
    assert record.manifest.scenario == "gauss_linear"
    assert record.summary.back_transformed
    expected = baseline_run.fit.summary.get("sigma_y").mean
    assert record.summary.get("sigma_y").mean == expected

    draws = read_draws(tmp_path)
    assert draws["draws"].shape == (2, 100, baseline_run.fit.model.dimension)
    assert draws["decoded_sigma_y"].shape == (2, 100)
    assert draws["step_size"].shape == (2,)

    predictions = read_table(tmp_path / "predictions.csv")
    assert len(predictions) == 20


def test_not_a_run_directory(tmp_path):
    with pytest.raises(DataError):
        read_manifest(tmp_path)
