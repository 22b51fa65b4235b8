"""
Warmup adaptation: dual-averaging step size and windowed diagonal metric.
"""

from typing import List, NamedTuple, Optional

import numpy as np
import structlog

from app.core.errors import ConfigurationError, SamplerFailure
from app.services.sampler.hamiltonian import ValueAndGrad
from app.services.sampler.nuts import NutsKernel, initial_step_size

logger = structlog.get_logger(__name__)

MIN_WARMUP = 150
REFERENCE_WARMUP = 750
INIT_BUFFER = 75
TERM_BUFFER = 50
BASE_WINDOW = 25


class DualAveraging:
    """
    Step-size adaptation towards a target mean acceptance statistic.

    The proximal centre is log of the step the averaging restarts from, so
    an accept statistic pinned at the target leaves the step unchanged.
    """

    def __init__(
        self,
        step_size: float,
        target_accept: float,
        gamma: float = 0.05,
        t0: float = 10.0,
        kappa: float = 0.75,
    ):
        self.target_accept = target_accept
        self.gamma = gamma
        self.t0 = t0
        self.kappa = kappa
        self.restart(step_size)

    def restart(self, step_size: float) -> None:
        self.mu = float(np.log(step_size))
        self.counter = 0
        self.s_bar = 0.0
        self.x_bar = 0.0
        self.step_size = step_size

    def update(self, accept_stat: float) -> float:
        self.counter += 1
        accept = min(1.0, accept_stat)
        eta = 1.0 / (self.counter + self.t0)
        self.s_bar = (1.0 - eta) * self.s_bar + eta * (self.target_accept - accept)
        x = self.mu - self.s_bar * np.sqrt(self.counter) / self.gamma
        x_eta = self.counter ** (-self.kappa)
        self.x_bar = x_eta * x + (1.0 - x_eta) * self.x_bar
        self.step_size = float(np.exp(x))
        return self.step_size

    @property
    def final_step_size(self) -> float:
        if self.counter == 0:
            return self.step_size
        return float(np.exp(self.x_bar))


class WelfordVariance:
    """Running per-coordinate variance."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.mean = np.zeros(self.dimension)
        self.m2 = np.zeros(self.dimension)

    def update(self, x: np.ndarray) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean = self.mean + delta / self.n
        self.m2 = self.m2 + delta * (x - self.mean)

    def regularized_variance(self) -> np.ndarray:
        """Sample variance shrunk towards 1e-3: (n/(n+5)) var + 1e-3 * 5/(n+5)."""
        if self.n < 2:
            raise SamplerFailure("Need at least two draws to estimate a variance")
        var = self.m2 / (self.n - 1)
        n = float(self.n)
        return (n / (n + 5.0)) * var + 1e-3 * (5.0 / (n + 5.0))


class WindowSchedule(NamedTuple):
    """Iteration indices of the warmup phases."""

    init_buffer: int
    term_buffer: int
    window_ends: List[int]
    warmup: int

    def in_slow_phase(self, iteration: int) -> bool:
        return self.init_buffer <= iteration < self.warmup - self.term_buffer


def window_schedule(warmup: int) -> WindowSchedule:
    """
    Fast initial buffer, doubling slow windows and a fast terminal buffer.

    The 75/25/50 layout is scaled by warmup/750; the last slow window
    stretches to the terminal buffer.
    """
    if warmup < MIN_WARMUP:
        raise ConfigurationError(
            f"Warmup must be at least {MIN_WARMUP} iterations for adaptation, got {warmup}"
        )
    scale = warmup / REFERENCE_WARMUP
    init_buffer = max(1, int(round(INIT_BUFFER * scale)))
    term_buffer = max(1, int(round(TERM_BUFFER * scale)))
    size = max(1, int(round(BASE_WINDOW * scale)))

    slow_end = warmup - term_buffer
    ends = []
    start = init_buffer
    while True:
        end = start + size
        if end + 2 * size > slow_end:
            ends.append(slow_end)
            break
        ends.append(end)
        start = end
        size *= 2
    return WindowSchedule(init_buffer, term_buffer, ends, warmup)


class AdaptationResult(NamedTuple):
    step_size: float
    inv_mass: np.ndarray
    q: np.ndarray
    logp: float
    grad: np.ndarray
    divergences: int
    accept_stats: np.ndarray


def adapt(
    value_and_grad: ValueAndGrad,
    q0: np.ndarray,
    warmup: int,
    target_accept: float,
    max_depth: int,
    rng: np.random.Generator,
    inv_mass: Optional[np.ndarray] = None,
    chain: int = 0,
) -> AdaptationResult:
    """
    Run warmup from q0 and return the frozen step size and inverse metric.

    Args:
        value_and_grad: Log-density and gradient
        q0: Starting point with finite log-density
        warmup: Number of warmup iterations, at least 150
        target_accept: Dual-averaging target
        max_depth: NUTS tree-depth limit
        rng: Chain-owned generator
        inv_mass: Initial inverse metric diagonal (unit by default)
        chain: Chain index, for log events only

    Returns:
        AdaptationResult with the last warmup state

    Raises:
        ConfigurationError: warmup below the minimum
        SamplerFailure: every warmup transition diverged
    """
    schedule = window_schedule(warmup)
    q = np.asarray(q0, dtype=float)
    inv_mass = np.ones_like(q) if inv_mass is None else np.asarray(inv_mass, dtype=float)
    logp, grad = value_and_grad(q)

    step = initial_step_size(q, inv_mass, value_and_grad, rng)
    averaging = DualAveraging(step, target_accept)
    variance = WelfordVariance(q.shape[0])
    kernel = NutsKernel(value_and_grad, step, inv_mass, max_depth)

    divergences = 0
    accept_stats = np.empty(warmup)
    window = 0
    for iteration in range(warmup):
        result = kernel.transition(q, rng, logp, grad)
        q, logp, grad = result.q, result.logp, result.grad
        divergences += int(result.diverged)
        accept_stats[iteration] = result.accept_stat
        kernel.step_size = averaging.update(result.accept_stat)

        if schedule.in_slow_phase(iteration):
            variance.update(q)
        if window < len(schedule.window_ends) and iteration + 1 == schedule.window_ends[window]:
            inv_mass = variance.regularized_variance()
            variance.reset()
            step = initial_step_size(q, inv_mass, value_and_grad, rng, kernel.step_size)
            averaging.restart(step)
            kernel = NutsKernel(value_and_grad, step, inv_mass, max_depth)
            logger.debug(
                "Metric window closed",
                chain=chain,
                iteration=iteration + 1,
                step_size=step,
            )
            window += 1

    if divergences == warmup:
        raise SamplerFailure(
            "Every warmup transition diverged",
            {"chain": chain, "warmup": warmup, "last_step_size": kernel.step_size},
        )
    return AdaptationResult(
        step_size=averaging.final_step_size,
        inv_mass=inv_mass,
        q=q,
        logp=logp,
        grad=grad,
        divergences=divergences,
        accept_stats=accept_stats,
    )
