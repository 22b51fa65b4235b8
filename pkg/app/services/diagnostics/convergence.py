"""
Rank-normalized split-R-hat and bulk and tail effective sample size.

All functions take a C x S array (chains x draws) of one scalar quantity.
"""

import numpy as np
import structlog
from scipy import fft, stats

from app.core.errors import DimensionMismatchError

logger = structlog.get_logger(__name__)


def _check_draws(ary) -> np.ndarray:
    ary = np.asarray(ary, dtype=float)
    if ary.ndim == 1:
        ary = ary[np.newaxis, :]
    if ary.ndim != 2:
        raise DimensionMismatchError(f"Expected chains x draws, got shape {ary.shape}")
    if ary.shape[1] < 4:
        raise DimensionMismatchError(f"Need at least 4 draws per chain, got {ary.shape[1]}")
    return ary


def split_chains(ary) -> np.ndarray:
    """Stack first and second halves of every chain; an odd middle draw is dropped."""
    ary = _check_draws(ary)
    half = ary.shape[1] // 2
    return np.vstack((ary[:, :half], ary[:, -half:]))


def z_scale(ary) -> np.ndarray:
    """Normal scores of the pooled ranks, (r - 3/8) / (n + 1/4)."""
    ary = np.asarray(ary, dtype=float)
    rank = stats.rankdata(ary, method="average").reshape(ary.shape)
    return stats.norm.ppf((rank - 0.375) / (ary.size + 0.25))


def _degenerate(split: np.ndarray) -> bool:
    return bool(np.all(np.ptp(split, axis=1) == 0.0))


def _rhat(ary: np.ndarray) -> float:
    n_draw = ary.shape[1]
    chain_mean = ary.mean(axis=1)
    within = np.mean(np.var(ary, axis=1, ddof=1))
    between = n_draw * np.var(chain_mean, ddof=1) if ary.shape[0] > 1 else 0.0
    var_plus = (n_draw - 1.0) / n_draw * within + between / n_draw
    return float(np.sqrt(var_plus / within))


def split_rhat(ary) -> float:
    """
    Rank-normalized split-R-hat (bulk).

    Returns NaN, with a warning, when every split chain is constant. Values
    are floored at 1.
    """
    split = split_chains(ary)
    if _degenerate(split) or not np.isfinite(split).all():
        logger.warning("R-hat undefined", reason="zero within-chain variance or non-finite draws")
        return float("nan")
    return max(1.0, _rhat(z_scale(split)))


def per_chain_rhat(ary) -> np.ndarray:
    """Split-R-hat of every chain on its own; flags chains stuck across halves."""
    ary = _check_draws(ary)
    return np.array([split_rhat(ary[c : c + 1]) for c in range(ary.shape[0])])


def autocovariance(x) -> np.ndarray:
    """Biased autocovariance of a 1-D series at every lag, via FFT."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    size = fft.next_fast_len(2 * n)
    centered = x - x.mean()
    spectrum = fft.rfft(centered, n=size)
    acov = fft.irfft(spectrum * np.conjugate(spectrum), n=size)[:n]
    return acov / n


def _ess(ary: np.ndarray) -> float:
    n_chain, n_draw = ary.shape
    acov = np.asarray([autocovariance(ary[chain]) for chain in range(n_chain)])
    chain_mean = ary.mean(axis=1)
    mean_var = np.mean(acov[:, 0]) * n_draw / (n_draw - 1.0)
    var_plus = mean_var * (n_draw - 1.0) / n_draw
    if n_chain > 1:
        var_plus += np.var(chain_mean, ddof=1)

    rho_hat_t = np.zeros(n_draw)
    rho_hat_even = 1.0
    rho_hat_t[0] = rho_hat_even
    rho_hat_odd = 1.0 - (mean_var - np.mean(acov[:, 1])) / var_plus
    rho_hat_t[1] = rho_hat_odd

    # initial positive sequence
    t = 1
    while t < (n_draw - 2) and (rho_hat_even + rho_hat_odd) >= 0.0:
        rho_hat_even = 1.0 - (mean_var - np.mean(acov[:, t + 1])) / var_plus
        rho_hat_odd = 1.0 - (mean_var - np.mean(acov[:, t + 2])) / var_plus
        rho_hat_t[t + 1] = rho_hat_even
        if (rho_hat_even + rho_hat_odd) >= 0:
            rho_hat_t[t + 2] = rho_hat_odd
        t += 2

    max_t = t
    # initial monotone sequence
    t = 1
    while t <= max_t - 2:
        if (rho_hat_t[t + 1] + rho_hat_t[t + 2]) > (rho_hat_t[t - 1] + rho_hat_t[t]):
            rho_hat_t[t + 1] = (rho_hat_t[t - 1] + rho_hat_t[t]) / 2.0
            rho_hat_t[t + 2] = rho_hat_t[t + 1]
        t += 2

    total = n_chain * n_draw
    tau_hat = -1.0 + 2.0 * np.sum(rho_hat_t[:max_t]) + np.sum(rho_hat_t[max_t + 1 : max_t + 2])
    tau_hat = max(tau_hat, 1.0 / np.log10(total))
    if np.isnan(rho_hat_t).any():
        return float("nan")
    return float(total / tau_hat)


def ess(ary) -> float:
    """
    Bulk effective sample size on rank-normalized split chains.

    Can exceed the draw count for antithetic chains; NaN when every split
    chain is constant.
    """
    split = split_chains(ary)
    if _degenerate(split) or not np.isfinite(split).all():
        logger.warning("ESS undefined", reason="zero within-chain variance or non-finite draws")
        return float("nan")
    return _ess(z_scale(split))


def _ess_quantile(ary: np.ndarray, prob: float) -> float:
    indicator = (ary <= np.quantile(ary, prob)).astype(float)
    split = split_chains(indicator)
    if _degenerate(split):
        return float("nan")
    return _ess(z_scale(split))


def ess_tail(ary, prob: float = 0.05) -> float:
    """
    Tail effective sample size: the smaller ESS of the prob and 1 - prob
    quantile indicators on split chains.
    """
    ary = _check_draws(ary)
    if not np.isfinite(ary).all() or np.ptp(ary) == 0.0:
        logger.warning("Tail ESS undefined", reason="constant or non-finite draws")
        return float("nan")
    return min(_ess_quantile(ary, prob), _ess_quantile(ary, 1.0 - prob))
