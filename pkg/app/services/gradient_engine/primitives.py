"""
Differentiable array primitives.

Each primitive evaluates plain numpy when none of its arguments is a Node,
so one piece of model code serves as both the plain evaluator and the
recorded one, running the same numpy operations in the same order.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import special

from app.services.gradient_engine.tape import Node, Tape

_BASIC_INDEX = (int, np.integer, slice, type(None), type(Ellipsis))


def value_of(x):
    """Primal value of a node, or the argument itself."""
    return x.value if isinstance(x, Node) else x


def is_node(x) -> bool:
    return isinstance(x, Node)


def _tape_of(*args) -> Optional[Tape]:
    for arg in args:
        if isinstance(arg, Node):
            return arg.tape
    return None


def _record(out, *pairs):
    tape = _tape_of(*(arg for arg, _ in pairs))
    if tape is None:
        return out
    return tape.record(out, [(arg, vjp) for arg, vjp in pairs if isinstance(arg, Node)])


def unbroadcast(grad, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast adjoint back down to the operand's shape."""
    grad = np.asarray(grad, dtype=float)
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def add(a, b):
    av, bv = value_of(a), value_of(b)
    sa, sb = np.shape(av), np.shape(bv)
    return _record(
        av + bv,
        (a, lambda g: unbroadcast(g, sa)),
        (b, lambda g: unbroadcast(g, sb)),
    )


def subtract(a, b):
    av, bv = value_of(a), value_of(b)
    sa, sb = np.shape(av), np.shape(bv)
    return _record(
        av - bv,
        (a, lambda g: unbroadcast(g, sa)),
        (b, lambda g: unbroadcast(-g, sb)),
    )


def multiply(a, b):
    av, bv = value_of(a), value_of(b)
    sa, sb = np.shape(av), np.shape(bv)
    return _record(
        av * bv,
        (a, lambda g: unbroadcast(g * bv, sa)),
        (b, lambda g: unbroadcast(g * av, sb)),
    )


def divide(a, b):
    av, bv = value_of(a), value_of(b)
    sa, sb = np.shape(av), np.shape(bv)
    out = av / bv
    return _record(
        out,
        (a, lambda g: unbroadcast(g / bv, sa)),
        (b, lambda g: unbroadcast(-g * out / bv, sb)),
    )


def negative(a):
    return _record(-value_of(a), (a, lambda g: -g))


def power(a, exponent: float):
    if isinstance(exponent, Node):
        raise TypeError("power supports constant exponents only")
    av = value_of(a)
    return _record(av**exponent, (a, lambda g: g * exponent * av ** (exponent - 1)))


def exp(a):
    out = np.exp(value_of(a))
    return _record(out, (a, lambda g: g * out))


def log(a):
    av = value_of(a)
    return _record(np.log(av), (a, lambda g: g / av))


def sqrt(a):
    out = np.sqrt(value_of(a))
    return _record(out, (a, lambda g: g * 0.5 / out))


def square(a):
    av = value_of(a)
    return _record(np.square(av), (a, lambda g: g * 2.0 * av))


def softplus(a):
    """log(1 + e^a)."""
    av = value_of(a)
    return _record(np.logaddexp(0.0, av), (a, lambda g: g * special.expit(av)))


def expit(a):
    out = special.expit(value_of(a))
    return _record(out, (a, lambda g: g * out * (1.0 - out)))


def gammaln(a):
    av = value_of(a)
    return _record(special.gammaln(av), (a, lambda g: g * special.digamma(av)))


def xlogy(coefficient, a):
    """coefficient * log(a) with 0 * log(0) = 0; the coefficient is a constant."""
    if isinstance(coefficient, Node):
        raise TypeError("xlogy supports a constant coefficient only")
    av = value_of(a)
    sa = np.shape(av)
    out = special.xlogy(coefficient, av)

    def vjp(g):
        c = np.broadcast_to(np.asarray(coefficient, dtype=float), np.shape(out))
        x = np.broadcast_to(np.asarray(av, dtype=float), np.shape(out))
        ratio = np.zeros(np.shape(out))
        np.divide(c, x, out=ratio, where=c != 0)
        return unbroadcast(g * ratio, sa)

    return _record(out, (a, vjp))


def sum(a, axis: Optional[int] = None):
    av = value_of(a)
    shape = np.shape(av)

    def vjp(g):
        if axis is None:
            return np.broadcast_to(g, shape)
        return np.broadcast_to(np.expand_dims(g, axis), shape)

    return _record(np.sum(av, axis=axis), (a, vjp))


def cumsum(a, axis: int = -1):
    def vjp(g):
        return np.flip(np.cumsum(np.flip(g, axis), axis=axis), axis)

    return _record(np.cumsum(value_of(a), axis=axis), (a, vjp))


def logsumexp(a, axis: Optional[int] = -1):
    av = value_of(a)
    out = special.logsumexp(av, axis=axis)

    def vjp(g):
        if axis is None:
            return g * np.exp(av - out)
        return np.expand_dims(g, axis) * np.exp(av - np.expand_dims(out, axis))

    return _record(out, (a, vjp))


def log_softmax(a, axis: int = -1):
    out = special.log_softmax(value_of(a), axis=axis)
    return _record(
        out,
        (a, lambda g: g - np.exp(out) * np.sum(g, axis=axis, keepdims=True)),
    )


def softmax(a, axis: int = -1):
    out = special.softmax(value_of(a), axis=axis)
    return _record(
        out,
        (a, lambda g: out * (g - np.sum(g * out, axis=axis, keepdims=True))),
    )


def concatenate(parts: Sequence, axis: int = -1):
    values = [value_of(part) for part in parts]
    out = np.concatenate(values, axis=axis)
    stops = np.cumsum([np.shape(v)[axis] for v in values])
    starts = stops - np.array([np.shape(v)[axis] for v in values])

    def part_vjp(start: int, stop: int):
        def vjp(g):
            index = [slice(None)] * np.ndim(g)
            index[axis] = slice(start, stop)
            return g[tuple(index)]

        return vjp

    return _record(
        out,
        *[
            (part, part_vjp(int(start), int(stop)))
            for part, start, stop in zip(parts, starts, stops)
        ],
    )


def _is_basic_index(index) -> bool:
    if isinstance(index, tuple):
        return all(isinstance(item, _BASIC_INDEX) for item in index)
    return isinstance(index, _BASIC_INDEX)


def getitem(a, index):
    av = value_of(a)
    shape = np.shape(av)

    def vjp(g):
        grad = np.zeros(shape)
        if _is_basic_index(index):
            grad[index] += g
        else:
            np.add.at(grad, index, g)
        return grad

    return _record(av[index], (a, vjp))


def reshape(a, shape: Tuple[int, ...]):
    av = value_of(a)
    original = np.shape(av)
    return _record(np.reshape(av, shape), (a, lambda g: np.reshape(g, original)))


def matmul(a, b):
    """Matrix and vector products for operands of rank 1 or 2."""
    av, bv = value_of(a), value_of(b)
    if np.ndim(av) not in (1, 2) or np.ndim(bv) not in (1, 2):
        raise ValueError("matmul supports 1-D and 2-D operands only")
    out = av @ bv

    def vjp_a(g):
        if np.ndim(av) == 2 and np.ndim(bv) == 2:
            return g @ bv.T
        if np.ndim(av) == 2:
            return np.outer(g, bv)
        if np.ndim(bv) == 2:
            return bv @ g
        return g * bv

    def vjp_b(g):
        if np.ndim(av) == 2:
            return av.T @ g
        if np.ndim(bv) == 2:
            return np.outer(av, g)
        return g * av

    return _record(out, (a, vjp_a), (b, vjp_b))


def _install_operators() -> None:
    Node.__add__ = add
    Node.__radd__ = lambda self, other: add(other, self)
    Node.__sub__ = subtract
    Node.__rsub__ = lambda self, other: subtract(other, self)
    Node.__mul__ = multiply
    Node.__rmul__ = lambda self, other: multiply(other, self)
    Node.__truediv__ = divide
    Node.__rtruediv__ = lambda self, other: divide(other, self)
    Node.__neg__ = negative
    Node.__pow__ = power
    Node.__matmul__ = matmul
    Node.__rmatmul__ = lambda self, other: matmul(other, self)
    Node.__getitem__ = getitem


_install_operators()
