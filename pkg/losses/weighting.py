"""
Combining the loss terms: learned log-variance weights or fixed weights
"""
from dataclasses import asdict, dataclass
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from autodiff import ops
from autodiff.tape import Var

LOSS_KEYS = ("r", "d", "IC", "bc")


@dataclass(frozen=True)
class LossBreakdown:
    """Values of one evaluation; w_k are the effective weights"""
    L_r: float
    L_d: float
    L_IC: float
    L_bc: float
    w_r: float
    w_d: float
    w_IC: float
    w_bc: float
    total: float
    epoch: int = 0

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)

    def term(self, key: str) -> float:
        return getattr(self, f"L_{key}")


def total_loss(terms: Mapping[str, Var], log_variances: Optional[Mapping[str, Var]] = None,
               fixed_weights: Optional[Mapping[str, float]] = None,
               epoch: int = 0) -> Tuple[Var, LossBreakdown]:
    """sum_k exp(-s_k) L_k + s_k with learned s_k, or sum_k w_k L_k with fixed weights"""
    total = None
    weights = {}
    for key in LOSS_KEYS:
        term = terms[key]
        if log_variances is not None:
            s = log_variances[key]
            contribution = ops.exp(-s) * term + s
            weights[key] = float(np.exp(-s.value))
        else:
            w = 1.0 if fixed_weights is None else float(fixed_weights.get(key, 1.0))
            contribution = term * w
            weights[key] = w
        total = contribution if total is None else total + contribution

    breakdown = LossBreakdown(
        L_r=float(terms["r"].value), L_d=float(terms["d"].value),
        L_IC=float(terms["IC"].value), L_bc=float(terms["bc"].value),
        w_r=weights["r"], w_d=weights["d"], w_IC=weights["IC"], w_bc=weights["bc"],
        total=float(total.value), epoch=epoch,
    )
    return total, breakdown
