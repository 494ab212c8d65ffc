"""
Elementary differentiable operations recorded on a Tape
"""
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import expit

from autodiff.tape import Var

ArrayLike = Union[Var, np.ndarray, float]


def _value(x: ArrayLike) -> np.ndarray:
    return x.value if isinstance(x, Var) else np.asarray(x, dtype=float)


def sigmoid_value(x: np.ndarray) -> np.ndarray:
    return expit(x)


def softplus_value(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def silu_value(x: np.ndarray) -> np.ndarray:
    return x * expit(x)


def silu_prime_value(x: np.ndarray) -> np.ndarray:
    s = expit(x)
    return s * (1.0 + x * (1.0 - s))


def silu_second_value(x: np.ndarray) -> np.ndarray:
    s = expit(x)
    return s * (1.0 - s) * (2.0 + x * (1.0 - 2.0 * s))


def inverse_softplus(y: float) -> float:
    """Raw value whose softplus is `y` (y > 0)"""
    return float(y + np.log(-np.expm1(-y)))


def exp(x: Var) -> Var:
    value = np.exp(x.value)
    return x.tape.record("exp", [x], value, [value])


def log(x: Var) -> Var:
    return x.tape.record("log", [x], np.log(x.value), [1.0 / x.value])


def sqrt(x: Var) -> Var:
    value = np.sqrt(x.value)
    return x.tape.record("sqrt", [x], value, [0.5 / value])


def square(x: Var) -> Var:
    return x.tape.record("square", [x], x.value * x.value, [2.0 * x.value])


def sigmoid(x: Var) -> Var:
    s = expit(x.value)
    return x.tape.record("sigmoid", [x], s, [s * (1.0 - s)])


def softplus(x: Var) -> Var:
    return x.tape.record("softplus", [x], softplus_value(x.value), [expit(x.value)])


def silu(x: Var) -> Var:
    return x.tape.record("silu", [x], silu_value(x.value), [silu_prime_value(x.value)])


def silu_prime(x: Var) -> Var:
    """silu'(x) as a recorded value, so tangents built from it stay differentiable"""
    return x.tape.record("silu_prime", [x], silu_prime_value(x.value), [silu_second_value(x.value)])


def total(x: Var) -> Var:
    """Sum of all entries"""
    shape = x.shape
    return x.tape.record("sum", [x], np.sum(x.value), [lambda g: np.broadcast_to(g, shape)])


def mean(x: Var) -> Var:
    shape = x.shape
    size = float(np.size(x.value))
    return x.tape.record("mean", [x], np.mean(x.value),
                         [lambda g: np.broadcast_to(g / size, shape)])


def sum_columns(x: Var) -> Var:
    """Row-wise sum of an (N, k) value, giving shape (N,)"""
    shape = x.shape
    return x.tape.record("sum_columns", [x], np.sum(x.value, axis=1),
                         [lambda g: np.broadcast_to(g[:, None], shape)])


def reshape(x: Var, shape: Sequence[int]) -> Var:
    original = x.shape
    return x.tape.record("reshape", [x], np.reshape(x.value, shape),
                         [lambda g: np.reshape(g, original)])


def column(x: Var, j: int) -> Var:
    """Column `j` of an (N, k) value"""
    shape = x.shape

    def vjp(g: np.ndarray) -> np.ndarray:
        out = np.zeros(shape)
        out[:, j] = g
        return out

    return x.tape.record(f"column[{j}]", [x], x.value[:, j], [vjp])


def stack_columns(columns: Sequence[Var]) -> Var:
    """Stack k vectors of shape (N,) into an (N, k) value"""
    tape = columns[0].tape
    value = np.stack([c.value for c in columns], axis=1)
    grads = [(lambda g, j=j: g[:, j]) for j in range(len(columns))]
    return tape.record("stack_columns", list(columns), value, grads)


def linear(x: ArrayLike, weight: Var, bias: Optional[Var] = None) -> Var:
    """x @ weight.T (+ bias) for x of shape (N, fan_in) and weight (fan_out, fan_in).

    `x` may be a plain array (network input, seed tangent) or a recorded Var.
    """
    tape = weight.tape
    x_value = _value(x)
    w_value = weight.value
    value = x_value @ w_value.T
    inputs = [weight]
    grads = [lambda g: g.T @ x_value]
    if bias is not None:
        value = value + bias.value
        inputs.append(bias)
        grads.append(lambda g: g.sum(axis=0))
    if isinstance(x, Var):
        inputs.append(x)
        grads.append(lambda g: g @ w_value)
    return tape.record("linear", inputs, value, grads)
