"""
Value-and-gradient entry point over the reverse-mode tape.
"""

from typing import Callable, Tuple

import numpy as np

from app.services.gradient_engine.primitives import is_node
from app.services.gradient_engine.tape import Tape


def value_and_grad(target: Callable, q) -> Tuple[float, np.ndarray]:
    """
    Evaluate a scalar target and its gradient at q.

    Args:
        target: Function of one flat array built from gradient_engine primitives
        q: Point of evaluation, shape (D,)

    Returns:
        (value, gradient). A non-finite value comes back with an all-zero
        gradient; callers treat it as a rejected point.
    """
    q = np.asarray(q, dtype=float)
    tape = Tape()
    x = tape.variable(q)
    out = target(x)

    if not is_node(out):
        value = float(out)
        return value, np.zeros_like(q)

    value = float(out.value)
    if not np.isfinite(value):
        return value, np.zeros_like(q)

    (grad,) = tape.gradient(out, [x])
    return value, grad
