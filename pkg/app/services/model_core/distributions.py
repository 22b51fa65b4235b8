"""
Log-densities written against the gradient_engine primitives.

All functions return exact, normalized log-densities summed over their
argument, and accept plain arrays or tape nodes.
"""

import numpy as np

from app.services.gradient_engine import primitives as ad

LOG_2PI = float(np.log(2.0 * np.pi))
LOG_2 = float(np.log(2.0))


def _size(x) -> int:
    return int(np.size(ad.value_of(x)))


def std_normal(x):
    return -0.5 * ad.sum(ad.square(x)) - 0.5 * _size(x) * LOG_2PI


def normal(x, loc, scale):
    z = (x - loc) / scale
    n = _size(x)
    return -0.5 * ad.sum(ad.square(z)) - n * ad.log(scale) - 0.5 * n * LOG_2PI


def half_normal(x, scale):
    n = _size(x)
    return (
        -0.5 * ad.sum(ad.square(x / scale))
        - n * ad.log(scale)
        + n * (LOG_2 - 0.5 * LOG_2PI)
    )


def exponential(x, rate):
    """Exp(rate); rate may be a per-element constant array."""
    return ad.sum(ad.log(rate) - rate * x)


def gamma_log_scale(log_x, shape, rate, log_rate=None):
    """
    Gamma(shape, rate) density of x = exp(log_x), evaluated from log_x.

    The Jacobian of the log transform is not included.
    """
    x = ad.exp(log_x)
    if log_rate is None:
        log_rate = ad.log(rate)
    n = _size(log_x)
    return (
        n * (shape * log_rate - ad.gammaln(shape))
        + (shape - 1.0) * ad.sum(log_x)
        - rate * ad.sum(x)
    )
