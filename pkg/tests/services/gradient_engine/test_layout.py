import numpy as np
import pytest

from app.core.errors import DimensionMismatchError, InvalidOrderError
from app.services.gradient_engine.layout import (
    BlockLayout,
    ParameterLayout,
    flatten,
    unflatten,
)


def test_block_layout_split_and_pack_are_inverse(rng):
    layout = BlockLayout([("a", ()), ("b", (2, 3)), ("c", (0,)), ("d", (4,))])
    assert layout.dimension == 11
    q = rng.standard_normal(11)
    blocks = layout.split(q)
    assert blocks["b"].shape == (2, 3)
    assert blocks["c"].shape == (0,)
    np.testing.assert_array_equal(layout.pack(blocks), q)


def test_pack_rejects_wrong_shapes():
    layout = BlockLayout([("a", (2,))])
    with pytest.raises(DimensionMismatchError):
        layout.pack({"a": np.zeros(3)})


def test_split_rejects_wrong_length():
    with pytest.raises(DimensionMismatchError):
        BlockLayout([("a", (2,))]).split(np.zeros(3))


def test_component_names():
    layout = BlockLayout([("alpha", ()), ("eta", (2, 1))])
    assert layout.component_names() == ["alpha", "eta[0,0]", "eta[1,0]"]


@pytest.mark.parametrize(
    "r, has_z, latent",
    [
        (1, False, 0),
        (2, False, 2 + 3),
        (3, True, 3 + 3),
    ],
)
def test_parameter_layout_dimension(r, has_z, latent):
    N, K = 3, 8
    layout = ParameterLayout(r, K, N, has_z)
    expected = N * (r - 1) + N * (K - r) + N + latent + 1 + 1 + (K - 2) + 1 + 2 + int(has_z)
    assert layout.dimension == expected
    assert ("beta_z" in layout) == has_z


def test_parameter_layout_rejects_bad_orders():
    with pytest.raises(InvalidOrderError):
        ParameterLayout(4, 8, 3, False)
    with pytest.raises(InvalidOrderError):
        ParameterLayout(3, 3, 3, False)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_flatten_unflatten_round_trip(r, make_config, make_state, rng):
    cfg = make_config(r=r, K=7, n_groups=3, has_z=True)
    state = make_state(cfg, rng)
    vector = flatten(state, cfg)
    assert vector.values.shape == (vector.layout.dimension,)
    back = unflatten(vector, cfg)
    np.testing.assert_array_equal(back.eta_rw, state.eta_rw)
    assert back.beta_z == state.beta_z
    np.testing.assert_array_equal(flatten(back, cfg).values, vector.values)
    np.testing.assert_array_equal(vector.block("log_tau"), state.log_tau)
