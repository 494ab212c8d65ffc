"""
Adam with bias correction, updating parameter arrays in place
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from core.models.run_config import TrainingConfig

logger = logging.getLogger("trainer.adam")


@dataclass
class AdamState:
    m: List[np.ndarray]
    v: List[np.ndarray]
    step: int = 0
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, params: Sequence[np.ndarray], config: TrainingConfig) -> "AdamState":
        return cls(
            m=[np.zeros_like(p, dtype=float) for p in params],
            v=[np.zeros_like(p, dtype=float) for p in params],
            learning_rate=config.learning_rate,
            beta1=config.beta1,
            beta2=config.beta2,
            eps=config.eps,
        )


def adam_step(params: Sequence[np.ndarray], grads: Sequence[np.ndarray], state: AdamState) -> bool:
    """Apply one update; returns False (and changes nothing) when a gradient is not finite"""
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError("params, grads and optimizer state differ in length")
    for g in grads:
        if not np.all(np.isfinite(g)):
            return False

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= state.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
    return True
