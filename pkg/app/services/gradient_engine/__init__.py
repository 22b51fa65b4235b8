"""
Gradient engine package.
Reverse-mode differentiation over numpy arrays, finite-difference oracles and
the flat parameter layout the sampler works in.
"""

from app.services.gradient_engine.tape import Node, Tape
from app.services.gradient_engine.autodiff import value_and_grad
from app.services.gradient_engine.checks import (
    GradientCheck,
    gradient_check,
    numerical_gradient,
)
from app.services.gradient_engine.layout import (
    BlockLayout,
    FlatParameterVector,
    ParameterLayout,
    flatten,
    unflatten,
)

__all__ = [
    "Node",
    "Tape",
    "value_and_grad",
    "GradientCheck",
    "gradient_check",
    "numerical_gradient",
    "BlockLayout",
    "FlatParameterVector",
    "ParameterLayout",
    "flatten",
    "unflatten",
]
