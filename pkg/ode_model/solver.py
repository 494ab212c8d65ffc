"""
Fixed-step classical Runge-Kutta integrator used as the reference solution
"""
import logging
from typing import Callable

import numpy as np

from core.exceptions import InvalidInputError, SolverError
from core.models.params import DosingSchedule, ParamSet
from ode_model.dosing import dosing_rate
from ode_model.system import vector_field
from ode_model.trajectory import SystemState, Trajectory

logger = logging.getLogger("ode_model.solver")


def solve_rk4(initial: SystemState, params: ParamSet, s_mt: Callable[[float], float],
              schedule: DosingSchedule, t0: float, tF: float, h: float) -> Trajectory:
    """Integrate from t0 to tF with step h; states are clipped at zero after every step.

    The last step is shortened when (tF - t0) is not a multiple of h.
    """
    if h <= 0:
        raise InvalidInputError(f"step must be positive, got {h}")
    if tF <= t0:
        raise InvalidInputError(f"tF ({tF}) must exceed t0 ({t0})")

    coeffs = params.model_dump()

    def f(t: float, y: np.ndarray) -> np.ndarray:
        u_t, u_g = dosing_rate(schedule, t)
        return np.array(vector_field(y[0], y[1], y[2], y[3], coeffs, float(s_mt(t)), u_t, u_g))

    n_steps = int(np.ceil((tF - t0) / h - 1e-9))
    times = t0 + h * np.arange(n_steps + 1, dtype=float)
    times[-1] = tF
    states = np.empty((n_steps + 1, 4))
    states[0] = initial.as_array()

    y = states[0].copy()
    for i in range(n_steps):
        t, dt = times[i], times[i + 1] - times[i]
        k1 = f(t, y)
        k2 = f(t + dt / 2, y + 0.5 * dt * k1)
        k3 = f(t + dt / 2, y + 0.5 * dt * k2)
        k4 = f(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise SolverError("non-finite state", time=float(times[i + 1]))
        y = np.maximum(y, 0.0)
        states[i + 1] = y

    s_values = np.array([float(s_mt(t)) for t in times])
    logger.debug(f"RK4 finished: {n_steps} steps on [{t0}, {tF}]")
    return Trajectory(times=times, states=states, s_mt=s_values)
