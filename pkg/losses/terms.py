"""
The four loss terms, evaluated on tape variables in normalized units.

Network outputs arrive as (N, 4) variables with columns C, T, M, G in normalized
units; time derivatives are taken with respect to normalized time tau in [0, 1].
"""
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from autodiff import ops
from autodiff.tape import Var
from core.exceptions import NumericError, RangeError
from core.models.params import DosingSchedule
from core.models.run_config import ConstraintSpec
from interp.normalizer import Normalizer
from ode_model.dosing import dosing_rate
from ode_model.system import vector_field

Coefficient = Union[Var, float, np.ndarray]


@dataclass
class ResidualContext:
    """What the residual needs besides the surrogate outputs"""
    normalizer: Normalizer
    schedule: DosingSchedule
    norm: str = "squared"
    euclidean_eps: float = 1e-12


def residual_loss(u: Var, du_dtau: Var, coeffs: Mapping[str, Coefficient],
                  tau: np.ndarray, context: ResidualContext) -> Var:
    """Mean over the grid of the squared (or plain) Euclidean norm of

        du/dtau - (duration / scale_k) * f_k(t, scale * u; coeffs)

    `coeffs` must hold every rate constant, s_MT included; time-varying ones are
    (N,) variables or arrays aligned with `tau`.
    """
    normalizer = context.normalizer
    scales = normalizer.state_scales()
    t_days = normalizer.days(tau)
    u_t, u_g = dosing_rate(context.schedule, t_days)

    states = [ops.column(u, k) * scales[k] for k in range(4)]
    derivs = vector_field(*states, coeffs, coeffs["s_MT"], u_t, u_g)
    residuals = [
        ops.column(du_dtau, k) - derivs[k] * (normalizer.duration / scales[k])
        for k in range(4)
    ]

    values = np.stack([r.value for r in residuals], axis=1)
    bad = ~np.all(np.isfinite(values), axis=1)
    if np.any(bad):
        magnitude = np.where(np.isfinite(values), np.abs(values), np.inf).max(axis=1)
        worst = int(np.argmax(np.where(bad, np.inf, magnitude)))
        raise NumericError(f"non-finite residual at t={t_days[worst]:.6g}", location=float(t_days[worst]))

    squared = ops.square(residuals[0])
    for r in residuals[1:]:
        squared = squared + ops.square(r)
    if context.norm == "euclidean":
        return ops.mean(ops.sqrt(squared + context.euclidean_eps))
    return ops.mean(squared)


def data_loss(u_at_obs: Var, observed: np.ndarray) -> Var:
    """(1/M) sum_i (C + T + M - observed_i)^2"""
    predicted = ops.column(u_at_obs, 0) + ops.column(u_at_obs, 1) + ops.column(u_at_obs, 2)
    return ops.mean(ops.square(predicted - np.asarray(observed, dtype=float)))


def _proportion_misfit(u: Var, proportions: np.ndarray, u_hat: np.ndarray) -> Var:
    """sum over rows k and X in (C, T, M) of (X_k - q_{X,k} * u_hat_k)^2"""
    targets = proportions * u_hat[:, None]
    misfit = None
    for x in range(3):
        term = ops.total(ops.square(ops.column(u, x) - targets[:, x]))
        misfit = term if misfit is None else misfit + term
    return misfit


def ic_loss(u_at_t0: Var, spec: ConstraintSpec, u_hat_t0: float) -> Var:
    """sum over (C, T, M) of (X(t0) - q_X * u_hat(t0))^2"""
    return _proportion_misfit(u_at_t0, np.array([spec.proportions]), np.array([u_hat_t0]))


def bc_loss(u_at_anchors: Var, specs: Sequence[ConstraintSpec], u_hat: np.ndarray,
            t_range: Optional[Sequence[float]] = None, mean_over_anchors: bool = False) -> Var:
    """Proportion misfit summed over the histology anchors (optionally divided by their count)"""
    if t_range is not None:
        for spec in specs:
            if not t_range[0] <= spec.day <= t_range[1]:
                raise RangeError(f"anchor day {spec.day} outside [{t_range[0]}, {t_range[1]}]")
    if not specs:
        return u_at_anchors.tape.constant(0.0)
    misfit = _proportion_misfit(
        u_at_anchors, np.array([s.proportions for s in specs]), np.asarray(u_hat, dtype=float)
    )
    return misfit * (1.0 / len(specs)) if mean_over_anchors else misfit
