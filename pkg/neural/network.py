"""
Fully connected networks mapping normalized time to positive outputs.

Hidden layers use SiLU, the output layer Softplus, so every output is strictly
positive. A network evaluates either plainly on numpy (dense curves, reporting) or on
a Tape through `bind()`, where it can also carry the time tangent d/dt alongside the
primal values.
"""
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from autodiff import ops
from autodiff.tape import Tape, Var
from core.exceptions import ConfigurationError, NumericError
from core.models.run_config import NetworkConfig

logger = logging.getLogger("neural")


def _as_column(t: Union[float, np.ndarray]) -> np.ndarray:
    return np.asarray(t, dtype=float).reshape(-1, 1)


class Network:
    """Weights W_k (fan_out x fan_in) and biases b_k of one feedforward surrogate"""

    def __init__(self, weights: List[np.ndarray], biases: List[np.ndarray],
                 config: NetworkConfig, seed: Union[int, Sequence[int]]):
        for k in range(1, len(weights)):
            if weights[k].shape[1] != weights[k - 1].shape[0]:
                raise ConfigurationError(
                    f"layer {k} expects {weights[k].shape[1]} inputs, previous layer gives "
                    f"{weights[k - 1].shape[0]}", field="hidden_sizes"
                )
        self.weights = weights
        self.biases = biases
        self.config = config
        self.seed = seed

    @classmethod
    def init(cls, config: NetworkConfig, seed: Union[int, Sequence[int]],
             input_dim: int = 1) -> "Network":
        """Uniform(-sqrt(1/fan_in), sqrt(1/fan_in)) weights, zero biases"""
        sizes = [input_dim] + list(config.hidden_sizes) + [config.output_dim]
        for i, size in enumerate(sizes[1:-1]):
            if size <= 0:
                raise ConfigurationError(f"layer size must be positive, got {size}",
                                         field=f"hidden_sizes[{i}]")
        if config.output_dim <= 0:
            raise ConfigurationError("must be positive", field="output_dim")
        rng = np.random.default_rng(seed)
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(1.0 / fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases, config, seed)

    @property
    def layer_sizes(self) -> List[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    def parameters(self) -> List[np.ndarray]:
        """W_1, b_1, W_2, b_2, ... (the arrays themselves, not copies)"""
        params = []
        for weight, bias in zip(self.weights, self.biases):
            params.extend([weight, bias])
        return params

    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters())

    def forward(self, t: Union[float, np.ndarray]) -> np.ndarray:
        """Plain evaluation; returns shape (N, output_dim)"""
        x = _as_column(t)
        if not np.all(np.isfinite(x)):
            raise NumericError("non-finite network input", layer=0)
        last = len(self.weights) - 1
        for k, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            z = x @ weight.T + bias
            x = ops.softplus_value(z) if k == last else ops.silu_value(z)
            if not np.all(np.isfinite(x)):
                raise NumericError(f"non-finite activation in layer {k + 1}", layer=k + 1)
        return x

    def bind(self, tape: Tape) -> "BoundNetwork":
        """Register the parameters as leaves on `tape`"""
        return BoundNetwork(self, [tape.leaf(p) for p in self.parameters()])


class BoundNetwork:
    """A Network whose parameters are leaves on a tape"""

    def __init__(self, network: Network, leaves: List[Var]):
        self.network = network
        self.leaves = leaves

    def _layers(self):
        return zip(self.leaves[0::2], self.leaves[1::2])

    def __call__(self, t: Union[float, np.ndarray, Var]) -> Var:
        """Recorded forward pass; `t` may itself be a leaf (shape () or (N,))"""
        if isinstance(t, Var):
            x = ops.reshape(t, (-1, 1))
        else:
            x = _as_column(t)
        last = len(self.network.weights) - 1
        for k, (weight, bias) in enumerate(self._layers()):
            z = ops.linear(x, weight, bias)
            x = ops.softplus(z) if k == last else ops.silu(z)
        return x

    def with_tangent(self, t: np.ndarray) -> Tuple[Var, Var]:
        """Outputs and their time derivative, both recorded on the tape.

        The tangent is pushed forward layer by layer (dz = dx W^T, dh = act'(z) dz) as
        ordinary recorded ops, so a loss on du/dt still backpropagates to the weights.
        """
        x = _as_column(t)
        dx = np.ones_like(x)
        last = len(self.network.weights) - 1
        for k, (weight, bias) in enumerate(self._layers()):
            z = ops.linear(x, weight, bias)
            dz = ops.linear(dx, weight)
            if k == last:
                x = ops.softplus(z)
                dx = ops.sigmoid(z) * dz
            else:
                x = ops.silu(z)
                dx = ops.silu_prime(z) * dz
        return x, dx
