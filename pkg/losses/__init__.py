"""
Residual, data, initial-condition and constraint losses with adaptive weighting
"""
from losses.terms import ResidualContext, bc_loss, data_loss, ic_loss, residual_loss
from losses.weighting import LOSS_KEYS, LossBreakdown, total_loss

__all__ = [
    "LOSS_KEYS", "LossBreakdown", "ResidualContext", "bc_loss", "data_loss",
    "ic_loss", "residual_loss", "total_loss",
]
