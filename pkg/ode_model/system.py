"""
Right-hand side of the tumor / T cell / MDSC / gemcitabine system
"""
from typing import Any, Mapping

import numpy as np

from core.exceptions import NumericError
from core.models.params import DosingSchedule, ParamSet
from ode_model.dosing import dosing_rate
from ode_model.trajectory import SystemState


def vector_field(C: Any, T: Any, M: Any, G: Any, coeffs: Mapping[str, Any],
                 s_mt: Any, u_t: Any, u_g: Any):
    """The four derivatives, written once for floats, arrays and tape variables alike"""
    dC = coeffs["p_C"] * C - coeffs["k_TC"] * C * T - coeffs["k_GC"] * C * G
    dT = (u_t + coeffs["n_T"] * T - coeffs["s_CT"] * T * C
          - s_mt * T * M - coeffs["k_GT"] * T * G)
    dM = coeffs["r_M"] * C - coeffs["k_GM"] * M * G - coeffs["d_M"] * M
    dG = u_g - coeffs["d_G"] * G
    return dC, dT, dM, dG


def rhs(state: SystemState, params: ParamSet, s_mt_at_t: float, t: float,
        schedule: DosingSchedule) -> SystemState:
    """d(state)/dt; `s_mt_at_t` overrides params.s_MT"""
    values = np.array([state.C, state.T, state.M, state.G, s_mt_at_t, t], dtype=float)
    if not np.all(np.isfinite(values)):
        raise NumericError(f"non-finite input to rhs: state={state}, s_MT={s_mt_at_t}, t={t}", location=t)
    u_t, u_g = dosing_rate(schedule, t)
    return SystemState(*vector_field(
        state.C, state.T, state.M, state.G, params.model_dump(), s_mt_at_t, u_t, u_g
    ))
