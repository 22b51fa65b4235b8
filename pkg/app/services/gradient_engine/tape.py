"""
Reverse-mode differentiation tape.

Nodes wrap numpy arrays. Every primitive applied to a node appends one record
to the node's tape holding, per parent, a vector-Jacobian product. The
backward sweep replays the records in reverse order.
"""

from typing import Callable, List, Sequence, Tuple

import numpy as np

VJP = Callable[[np.ndarray], np.ndarray]


class Node:
    """A recorded value: primal array, owning tape and position on it."""

    __slots__ = ("value", "tape", "index")

    # keep numpy from absorbing nodes into object arrays; ndarray op Node
    # falls through to the reflected operators installed by primitives
    __array_ufunc__ = None

    def __init__(self, value, tape: "Tape", index: int):
        self.value = value
        self.tape = tape
        self.index = index

    @property
    def shape(self) -> Tuple[int, ...]:
        return np.shape(self.value)

    @property
    def ndim(self) -> int:
        return np.ndim(self.value)

    @property
    def size(self) -> int:
        return np.size(self.value)

    def __len__(self) -> int:
        return len(self.value)

    def __repr__(self) -> str:
        return f"Node(index={self.index}, shape={self.shape})"


class Tape:
    """Ordered record of primitive applications for one evaluation."""

    def __init__(self):
        self.records: List[Tuple[Tuple[int, VJP], ...]] = []

    def __len__(self) -> int:
        return len(self.records)

    def variable(self, value) -> Node:
        """Register an input; it has no parents."""
        return self.record(np.asarray(value, dtype=float), ())

    def record(self, value, parents: Sequence[Tuple[Node, VJP]]) -> Node:
        node = Node(value, self, len(self.records))
        self.records.append(tuple((parent.index, vjp) for parent, vjp in parents))
        return node

    def gradient(self, output: Node, inputs: Sequence[Node]) -> List[np.ndarray]:
        """
        Run the backward sweep from a scalar output.

        Args:
            output: Scalar node recorded on this tape
            inputs: Nodes whose adjoints are wanted

        Returns:
            One adjoint array per input, shaped like the input
        """
        if output.tape is not self:
            raise ValueError("Output node belongs to a different tape")
        adjoints: List = [None] * len(self.records)
        adjoints[output.index] = np.ones_like(output.value, dtype=float)

        for index in range(output.index, -1, -1):
            adjoint = adjoints[index]
            if adjoint is None:
                continue
            for parent, vjp in self.records[index]:
                contribution = vjp(adjoint)
                if adjoints[parent] is None:
                    adjoints[parent] = contribution
                else:
                    adjoints[parent] = adjoints[parent] + contribution

        grads = []
        for node in inputs:
            adjoint = adjoints[node.index]
            if adjoint is None:
                adjoint = np.zeros_like(node.value, dtype=float)
            grads.append(np.asarray(adjoint, dtype=float).reshape(np.shape(node.value)))
        return grads
