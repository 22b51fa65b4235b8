import numpy as np
import pytest

from app.schemas.config import ModelConfig, SamplerSettings
from app.schemas.dataset import DomainSpec, GroupedDataset, GroupRecord
from app.services.gradient_engine.layout import ParameterLayout
from app.services.model_core.state import BinnedCovariates, ParameterState, Responses


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run replication studies"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def build_config(r=3, K=8, n_groups=4, has_z=False, a=-3.0, b=3.0, **sampler):
    return ModelConfig(
        r=r,
        K=K,
        domain=DomainSpec(a_prime=a, b_prime=b, a=a, b=b, K=K),
        delta=[0.1] * n_groups,
        has_scalar_covariate=has_z,
        sampler=SamplerSettings(**sampler),
    )


def random_state(cfg, rng, scale=0.5):
    layout = ParameterLayout.for_config(cfg)
    return ParameterState.from_blocks(layout.split(scale * rng.standard_normal(layout.dimension)))


def random_problem(cfg, rng, n_per_group=30):
    """Random counts and responses matching a configuration."""
    counts = rng.multinomial(n_per_group, np.full(cfg.K, 1.0 / cfg.K), size=cfg.n_groups)
    y = rng.standard_normal(cfg.n_groups)
    z = rng.standard_normal(cfg.n_groups) if cfg.has_scalar_covariate else None
    return BinnedCovariates(counts=counts, domain=cfg.domain), Responses(y=y, z=z)


@pytest.fixture
def make_config():
    return build_config


@pytest.fixture
def make_state():
    return random_state


@pytest.fixture
def make_problem():
    return random_problem


@pytest.fixture
def toy_dataset():
    """Three small groups on [0, 10]."""
    return GroupedDataset(
        groups=[
            GroupRecord(y=1.0, x=[1.0, 2.0, 2.5, 3.0, 4.0]),
            GroupRecord(y=2.5, x=[4.0, 5.0, 5.5, 6.0]),
            GroupRecord(y=4.0, x=[6.0, 7.5, 8.0, 9.0, 9.5, 10.0]),
        ]
    )
