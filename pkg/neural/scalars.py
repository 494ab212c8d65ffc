"""
Positive constant coefficients learned through a softplus reparameterization
"""
import numpy as np

from autodiff import ops
from autodiff.tape import Tape, Var


class TrainableScalar:
    """value = softplus(raw) when trainable; a fixed value when pinned"""

    def __init__(self, name: str, initial: float, trainable: bool = True):
        self.name = name
        self.trainable = trainable
        if trainable:
            self.raw = np.array(ops.inverse_softplus(max(initial, 1e-12)))
        else:
            self.raw = np.array(float(initial))

    @property
    def value(self) -> float:
        if self.trainable:
            return float(ops.softplus_value(self.raw))
        return float(self.raw)

    def bind(self, tape: Tape) -> Var:
        """The raw leaf (trainable) or a constant node (pinned)"""
        return tape.leaf(self.raw) if self.trainable else tape.constant(self.raw)

    def transform(self, bound: Var) -> Var:
        """Map the bound raw value to the positive coefficient"""
        return ops.softplus(bound) if self.trainable else bound

    def __repr__(self) -> str:
        state = "trainable" if self.trainable else "pinned"
        return f"TrainableScalar({self.name}={self.value:.6g}, {state})"
