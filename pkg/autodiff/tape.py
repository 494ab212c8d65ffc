"""
Tape-based reverse-mode differentiation over numpy values.

Every value produced while a loss is being evaluated is appended to a `Tape` as a
`Node` holding its value, its parents and the local derivative towards each parent.
A local derivative is either an array (multiplied elementwise into the adjoint) or a
callable mapping the node's adjoint to the parent's contribution (used by matrix ops).
Because the tape is append-only, index order is already a topological order, so the
backward pass is a single sweep from the output down to index 0.
"""
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.exceptions import AutodiffError

LocalGrad = Union[float, np.ndarray, Callable[[np.ndarray], np.ndarray]]
Operand = Union["Var", float, int, np.ndarray]


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast adjoint back down to `shape`"""
    grad = np.asarray(grad, dtype=float)
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


class Node:
    """One recorded value and the edges back to its inputs"""

    __slots__ = ("index", "op", "value", "parents", "grad", "requires_grad")

    def __init__(self, index: int, op: str, value: np.ndarray,
                 parents: List[Tuple[int, LocalGrad]], requires_grad: bool):
        self.index = index
        self.op = op
        self.value = value
        self.parents = parents
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad

    def __repr__(self) -> str:
        return f"Node({self.index}, {self.op}, shape={np.shape(self.value)})"


class Tape:
    """Append-only record of a computation"""

    def __init__(self):
        self.nodes: List[Node] = []
        self._checkpoints: List[int] = []

    def __len__(self) -> int:
        return len(self.nodes)

    def _append(self, op: str, value: Any, parents: List[Tuple[int, LocalGrad]],
                requires_grad: bool) -> "Var":
        index = len(self.nodes)
        self.nodes.append(Node(index, op, value, parents, requires_grad))
        return Var(self, index)

    def leaf(self, value: Any) -> "Var":
        """Record a differentiable input.

        Arrays are stored by reference, so in-place updates by an optimizer are seen by
        every later evaluation that reuses this leaf.
        """
        if not isinstance(value, np.ndarray):
            value = np.asarray(value, dtype=float)
        return self._append("leaf", value, [], True)

    def constant(self, value: Any) -> "Var":
        """Record a value that never receives a gradient"""
        return self._append("const", np.asarray(value, dtype=float), [], False)

    def record(self, op: str, inputs: Sequence["Var"], value: Any,
               local_grads: Sequence[LocalGrad]) -> "Var":
        """Append the result of `op` applied to `inputs`"""
        if len(inputs) != len(local_grads):
            raise AutodiffError(f"{op}: {len(inputs)} inputs but {len(local_grads)} local gradients")
        parents = []
        for var, local in zip(inputs, local_grads):
            if var.tape is not self:
                raise AutodiffError(f"{op}: input recorded on a different tape")
            if self.nodes[var.index].requires_grad:
                parents.append((var.index, local))
        return self._append(op, np.asarray(value, dtype=float), parents, bool(parents))

    def node(self, var: "Var") -> Node:
        return self.nodes[var.index]

    def checkpoint(self) -> int:
        """Remember the current length; `reset()` truncates back to it"""
        mark = len(self.nodes)
        self._checkpoints.append(mark)
        return mark

    def reset(self, mark: Optional[int] = None) -> None:
        """Drop every node recorded after `mark` (default: the latest checkpoint)"""
        if mark is None:
            mark = self._checkpoints[-1] if self._checkpoints else 0
        del self.nodes[mark:]
        self._checkpoints = [c for c in self._checkpoints if c <= mark]
        for node in self.nodes:
            node.grad = None

    def backward(self, output: "Var", leaves: Optional[Sequence["Var"]] = None) -> List[np.ndarray]:
        """Accumulate d(output)/d(node) into every node and return the leaf gradients.

        Leaves that do not influence `output` get zeros of their own shape.
        """
        out = self.nodes[output.index]
        if np.size(out.value) != 1:
            raise AutodiffError(f"backward needs a scalar output, got shape {np.shape(out.value)}")
        for node in self.nodes[: output.index + 1]:
            node.grad = None
        out.grad = np.ones_like(out.value, dtype=float)

        for index in range(output.index, -1, -1):
            node = self.nodes[index]
            if node.grad is None or not node.parents:
                continue
            for parent_index, local in node.parents:
                if parent_index >= index:
                    raise AutodiffError(f"cycle: node {index} ({node.op}) has parent {parent_index}")
                parent = self.nodes[parent_index]
                contribution = local(node.grad) if callable(local) else node.grad * local
                contribution = _unbroadcast(contribution, np.shape(parent.value))
                parent.grad = contribution if parent.grad is None else parent.grad + contribution

        if leaves is None:
            return []
        return [self.grad(leaf) for leaf in leaves]

    def grad(self, var: "Var") -> np.ndarray:
        node = self.nodes[var.index]
        if node.grad is None:
            return np.zeros_like(node.value, dtype=float)
        return node.grad


class Var:
    """Handle to a node; arithmetic on handles records new nodes"""

    __slots__ = ("tape", "index")
    # keep numpy from broadcasting over Var objects elementwise
    __array_ufunc__ = None

    def __init__(self, tape: Tape, index: int):
        self.tape = tape
        self.index = index

    @property
    def value(self) -> np.ndarray:
        return self.tape.nodes[self.index].value

    @property
    def shape(self) -> Tuple[int, ...]:
        return np.shape(self.value)

    def __repr__(self) -> str:
        return f"Var(index={self.index}, value={self.value!r})"

    def __add__(self, other: Operand) -> "Var":
        if isinstance(other, Var):
            return self.tape.record("add", [self, other], self.value + other.value, [1.0, 1.0])
        return self.tape.record("add", [self], self.value + other, [1.0])

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "Var":
        if isinstance(other, Var):
            return self.tape.record("sub", [self, other], self.value - other.value, [1.0, -1.0])
        return self.tape.record("sub", [self], self.value - other, [1.0])

    def __rsub__(self, other: Operand) -> "Var":
        return self.tape.record("sub", [self], other - self.value, [-1.0])

    def __neg__(self) -> "Var":
        return self.tape.record("neg", [self], -self.value, [-1.0])

    def __mul__(self, other: Operand) -> "Var":
        if isinstance(other, Var):
            return self.tape.record("mul", [self, other], self.value * other.value,
                                    [other.value, self.value])
        return self.tape.record("mul", [self], self.value * other, [np.asarray(other, dtype=float)])

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "Var":
        if isinstance(other, Var):
            inv = 1.0 / other.value
            value = self.value * inv
            return self.tape.record("div", [self, other], value, [inv, -value * inv])
        inv = 1.0 / np.asarray(other, dtype=float)
        return self.tape.record("div", [self], self.value * inv, [inv])

    def __rtruediv__(self, other: Operand) -> "Var":
        value = other / self.value
        return self.tape.record("div", [self], value, [-value / self.value])

    def __pow__(self, power: float) -> "Var":
        if isinstance(power, Var):
            raise AutodiffError("variable exponents are not supported")
        value = self.value ** power
        return self.tape.record("pow", [self], value, [power * self.value ** (power - 1)])


def grad_wrt_input(fn: Callable[[Var], Var], t: float) -> float:
    """d fn / d t at `t`, with `t` recorded as a differentiable leaf on a fresh tape"""
    tape = Tape()
    t_var = tape.leaf(np.asarray(t, dtype=float))
    output = fn(t_var)
    (grad,) = tape.backward(output, [t_var])
    return float(grad)
