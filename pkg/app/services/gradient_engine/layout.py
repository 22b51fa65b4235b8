"""
Flat parameter vector layout.

Maps the named blocks of a ParameterState onto contiguous index ranges of
the D-dimensional vector the sampler moves in. Zero-size blocks (eta_free
for r=1) keep their place in the ordering.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from app.core.errors import DimensionMismatchError, InvalidOrderError
from app.schemas.config import ModelConfig
from app.services.gradient_engine import primitives as ad
from app.services.model_core.state import ParameterState


class BlockLayout:
    """Ordered block name -> (slice, shape) map over a flat vector."""

    def __init__(self, shapes: Sequence[Tuple[str, Tuple[int, ...]]]):
        self.blocks: "OrderedDict[str, Tuple[slice, Tuple[int, ...]]]" = OrderedDict()
        offset = 0
        for name, shape in shapes:
            size = int(np.prod(shape, dtype=int))
            self.blocks[name] = (slice(offset, offset + size), tuple(shape))
            offset += size
        self.dimension = offset

    def __iter__(self) -> Iterator[str]:
        return iter(self.blocks)

    def __contains__(self, name: str) -> bool:
        return name in self.blocks

    def split(self, q) -> Dict[str, object]:
        """
        Slice a flat vector (array or tape node) into named blocks.

        Scalar blocks come back as 0-d values, the others reshaped.
        """
        if ad.value_of(q).shape != (self.dimension,):
            raise DimensionMismatchError(
                f"Expected a vector of length {self.dimension}, got {ad.value_of(q).shape}"
            )
        blocks = {}
        for name, (index, shape) in self.blocks.items():
            if shape == ():
                blocks[name] = q[index.start]
            else:
                blocks[name] = ad.reshape(q[index], shape)
        return blocks

    def pack(self, blocks: Dict[str, object]) -> np.ndarray:
        """Inverse of split for plain arrays."""
        values = np.empty(self.dimension)
        for name, (index, shape) in self.blocks.items():
            array = np.asarray(blocks[name], dtype=float)
            if array.shape != shape:
                raise DimensionMismatchError(
                    f"Block '{name}' has shape {array.shape}, expected {shape}"
                )
            values[index] = array.ravel()
        return values

    def component_names(self) -> List[str]:
        """Names of every coordinate, e.g. 'eta_rw[3,2]' or 'alpha'."""
        names = []
        for name, (_, shape) in self.blocks.items():
            if shape == ():
                names.append(name)
                continue
            for idx in np.ndindex(*shape):
                names.append(f"{name}[{','.join(str(i) for i in idx)}]")
        return names


class ParameterLayout(BlockLayout):
    """The FRODO block layout for one model configuration."""

    def __init__(self, r: int, K: int, n_groups: int, has_scalar_covariate: bool):
        if r not in (1, 2, 3):
            raise InvalidOrderError(f"Random-walk order must be 1, 2 or 3, got {r}")
        if K < max(r + 1, 2):
            raise InvalidOrderError(f"K={K} too small for order r={r}")
        self.r = r
        self.K = K
        self.n_groups = n_groups
        self.has_scalar_covariate = has_scalar_covariate

        N = n_groups
        shapes: List[Tuple[str, Tuple[int, ...]]] = [
            ("eta_free", (N, r - 1)),
            ("eta_rw", (N, K - r)),
            ("log_tau", (N,)),
        ]
        if r == 3:
            shapes += [
                ("xi_raw", (N,)),
                ("mu_xi", ()),
                ("log_sigma_xi", ()),
                ("log_sigma_x", ()),
            ]
        elif r == 2:
            shapes += [
                ("log_lambda", (N,)),
                ("log_mu_lambda", ()),
                ("log_alpha_lambda", ()),
            ]
        shapes += [
            ("alpha", ()),
            ("beta0_free", ()),
            ("beta0_rw", (K - 2,)),
            ("log_tau_beta", ()),
            ("log_sigma_y_z", ()),
            ("log_sigma_y_g", ()),
        ]
        if has_scalar_covariate:
            shapes.append(("beta_z", ()))

        super().__init__(shapes)

    @classmethod
    def for_config(cls, cfg: ModelConfig) -> "ParameterLayout":
        return cls(cfg.r, cfg.K, cfg.n_groups, cfg.has_scalar_covariate)


@dataclass(frozen=True)
class FlatParameterVector:
    values: np.ndarray
    layout: ParameterLayout

    def block(self, name: str) -> np.ndarray:
        index, shape = self.layout.blocks[name]
        return self.values[index].reshape(shape)


def flatten(state: ParameterState, cfg: ModelConfig) -> FlatParameterVector:
    """Pack a ParameterState into the flat sampling vector."""
    layout = ParameterLayout.for_config(cfg)
    blocks = state.as_blocks()
    missing = [name for name in layout if name not in blocks]
    extra = [name for name in blocks if name not in layout]
    if missing or extra:
        raise DimensionMismatchError(
            f"State blocks do not match the layout (missing={missing}, unexpected={extra})"
        )
    return FlatParameterVector(values=layout.pack(blocks), layout=layout)


def unflatten(vector, cfg: ModelConfig) -> ParameterState:
    """Inverse of flatten; accepts a FlatParameterVector or a bare array."""
    layout = ParameterLayout.for_config(cfg)
    values = vector.values if isinstance(vector, FlatParameterVector) else vector
    values = np.asarray(values, dtype=float)
    return ParameterState.from_blocks(layout.split(values))
