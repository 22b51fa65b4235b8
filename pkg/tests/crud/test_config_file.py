import pytest

from app.core.errors import ConfigurationError
from app.crud import read_fit_config, write_fit_config
from app.schemas.config import FlatFitConfig


def test_config_round_trip(tmp_path):
    config = FlatFitConfig(r=2, K=12, a_prime=0.0, b_prime=4.5, delta=[0.1, 0.05], chains=2, seed=9)
    path = write_fit_config(config, tmp_path / "fit.toml")
    assert read_fit_config(path) == config


def test_unknown_key(tmp_path):
    path = tmp_path / "fit.toml"
    path.write_text("r = 3\nbins = 10\n")
    with pytest.raises(ConfigurationError) as excinfo:
        read_fit_config(path)
    assert excinfo.value.exit_code == 3
    assert excinfo.value.details["errors"]


def test_invalid_toml(tmp_path):
    path = tmp_path / "fit.toml"
    path.write_text("r = = 3\n")
    with pytest.raises(ConfigurationError):
        read_fit_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        read_fit_config(tmp_path / "nope.toml")
