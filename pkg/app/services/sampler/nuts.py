"""
Multinomial No-U-Turn transition.

The trajectory is a binary tree grown by doubling in a random direction.
Inside a subtree the proposal is drawn uniformly in proportion to the state
weights exp(-H); at the top level the draw is biased towards the new
subtree. Growth stops on a U-turn (including the two cross-subtree checks),
a divergence or the depth limit.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from app.core.errors import SamplerFailure
from app.services.sampler.hamiltonian import (
    PhasePoint,
    ValueAndGrad,
    leapfrog,
    phase_point,
    sample_momentum,
)

MAX_DELTA_H = 1000.0
LOG_INIT_ACCEPT = float(np.log(0.8))


class _Tree(NamedTuple):
    left: PhasePoint
    right: PhasePoint
    rho: np.ndarray
    log_weight: float
    proposal: PhasePoint
    depth: int


@dataclass
class _Stats:
    h0: float
    n_leapfrog: int = 0
    sum_accept: float = 0.0
    diverged: bool = False


class TransitionResult(NamedTuple):
    q: np.ndarray
    logp: float
    grad: np.ndarray
    accept_stat: float
    depth: int
    diverged: bool
    n_leapfrog: int
    energy: float


def _u_turn(p_sharp_left: np.ndarray, p_sharp_right: np.ndarray, rho: np.ndarray) -> bool:
    return float(np.dot(p_sharp_left, rho)) <= 0.0 or float(np.dot(p_sharp_right, rho)) <= 0.0


def _merge(left: _Tree, right: _Tree, proposal: PhasePoint, log_weight: float) -> _Tree:
    return _Tree(
        left=left.left,
        right=right.right,
        rho=left.rho + right.rho,
        log_weight=log_weight,
        proposal=proposal,
        depth=left.depth + 1,
    )


def _terminates(tree: _Tree, left: _Tree, right: _Tree) -> bool:
    if _u_turn(tree.left.p_sharp, tree.right.p_sharp, tree.rho):
        return True
    if tree.depth > 1:
        if _u_turn(left.left.p_sharp, right.left.p_sharp, left.rho + right.left.p):
            return True
        if _u_turn(left.right.p_sharp, right.right.p_sharp, right.rho + left.right.p):
            return True
    return False


class NutsKernel:
    """
    NUTS transition kernel for a fixed step size and diagonal metric.

    Depth counts from 0: doublings 0..max_depth build subtrees of 1, 2, ...,
    2**max_depth leapfrog steps, so a transition takes at most
    2**(max_depth + 1) - 1 steps. max_depth=0 is a single leapfrog step.
    """

    def __init__(
        self,
        value_and_grad: ValueAndGrad,
        step_size: float,
        inv_mass: np.ndarray,
        max_depth: int,
        max_delta_h: float = MAX_DELTA_H,
    ):
        self.value_and_grad = value_and_grad
        self.step_size = step_size
        self.inv_mass = np.asarray(inv_mass, dtype=float)
        self.max_depth = max_depth
        self.max_delta_h = max_delta_h

    def _leaf(self, point: PhasePoint, direction: int, stats: _Stats) -> Optional[_Tree]:
        new = leapfrog(
            point.q,
            point.p,
            direction * self.step_size,
            self.inv_mass,
            self.value_and_grad,
            grad=point.grad,
        )
        stats.n_leapfrog += 1
        delta = new.hamiltonian - stats.h0
        stats.sum_accept += 1.0 if delta <= 0 else float(np.exp(-delta))
        if delta > self.max_delta_h:
            stats.diverged = True
            return None
        return _Tree(
            left=new,
            right=new,
            rho=new.p,
            log_weight=-new.hamiltonian,
            proposal=new,
            depth=0,
        )

    def _build(
        self,
        point: PhasePoint,
        direction: int,
        depth: int,
        stats: _Stats,
        rng: np.random.Generator,
    ) -> Optional[_Tree]:
        """Grow a subtree of 2**depth states from point; None if it must be discarded."""
        if depth == 0:
            return self._leaf(point, direction, stats)

        inner = self._build(point, direction, depth - 1, stats, rng)
        if inner is None:
            return None
        edge = inner.right if direction > 0 else inner.left
        outer = self._build(edge, direction, depth - 1, stats, rng)
        if outer is None:
            return None

        log_weight = float(np.logaddexp(inner.log_weight, outer.log_weight))
        take_outer = np.log(rng.uniform()) < outer.log_weight - log_weight
        proposal = outer.proposal if take_outer else inner.proposal

        left, right = (inner, outer) if direction > 0 else (outer, inner)
        tree = _merge(left, right, proposal, log_weight)
        if _terminates(tree, left, right):
            return None
        return tree

    def transition(
        self,
        q: np.ndarray,
        rng: np.random.Generator,
        logp: Optional[float] = None,
        grad: Optional[np.ndarray] = None,
    ) -> TransitionResult:
        if logp is None or grad is None:
            logp, grad = self.value_and_grad(q)
        p = sample_momentum(rng, self.inv_mass)
        start = phase_point(q, p, logp, grad, self.inv_mass)
        stats = _Stats(h0=start.hamiltonian)

        tree = _Tree(
            left=start,
            right=start,
            rho=start.p,
            log_weight=-start.hamiltonian,
            proposal=start,
            depth=0,
        )
        sample = start
        depth = 0
        for depth_index in range(self.max_depth + 1):
            direction = 1 if rng.uniform() < 0.5 else -1
            edge = tree.right if direction > 0 else tree.left
            new = self._build(edge, direction, depth_index, stats, rng)
            depth = depth_index + 1
            if new is None:
                break

            if np.log(rng.uniform()) < new.log_weight - tree.log_weight:
                sample = new.proposal
            left, right = (tree, new) if direction > 0 else (new, tree)
            log_weight = float(np.logaddexp(tree.log_weight, new.log_weight))
            tree = _merge(left, right, sample, log_weight)
            if _terminates(tree, left, right):
                break

        accept = stats.sum_accept / stats.n_leapfrog if stats.n_leapfrog else 0.0
        return TransitionResult(
            q=sample.q,
            logp=sample.logp,
            grad=sample.grad,
            accept_stat=accept,
            depth=depth,
            diverged=stats.diverged,
            n_leapfrog=stats.n_leapfrog,
            energy=sample.hamiltonian,
        )


def nuts_transition(
    q: np.ndarray,
    step: float,
    inv_mass: np.ndarray,
    value_and_grad: ValueAndGrad,
    max_depth: int,
    rng: np.random.Generator,
) -> TransitionResult:
    """One NUTS transition from q; see NutsKernel."""
    return NutsKernel(value_and_grad, step, inv_mass, max_depth).transition(q, rng)


def initial_step_size(
    q: np.ndarray,
    inv_mass: np.ndarray,
    value_and_grad: ValueAndGrad,
    rng: np.random.Generator,
    step: float = 1.0,
    max_iterations: int = 100,
) -> float:
    """
    Double or halve the step until a single leapfrog step's acceptance
    crosses 0.8.

    Raises:
        SamplerFailure: the log-density is not finite at q, or no step size
            in range crosses the threshold
    """
    logp, grad = value_and_grad(q)
    if not np.isfinite(logp):
        raise SamplerFailure("Log-density is not finite at the initial point")

    direction = 0
    for _ in range(max_iterations):
        start = phase_point(q, sample_momentum(rng, inv_mass), logp, grad, inv_mass)
        new = leapfrog(q, start.p, step, inv_mass, value_and_grad, grad=grad)
        delta = start.hamiltonian - new.hamiltonian
        if np.isnan(delta):
            delta = -np.inf
        if direction == 0:
            direction = 1 if delta > LOG_INIT_ACCEPT else -1
        if direction == 1 and not delta > LOG_INIT_ACCEPT:
            return step
        if direction == -1 and not delta < LOG_INIT_ACCEPT:
            return step
        step = step * 2.0 if direction == 1 else step / 2.0
        if step > 1e7 or step < 1e-12:
            raise SamplerFailure(f"Step size search left the usable range (step={step:g})")
    return step
