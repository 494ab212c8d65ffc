"""
Injection forcing terms U_T(t) and U_G(t)
"""
from typing import Tuple, Union

import numpy as np

from core.models.params import DosingSchedule

TimeLike = Union[float, np.ndarray]

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def _pulse(t: TimeLike, day: float, dose: float, width: float) -> TimeLike:
    """dose * N(t; day, width); integrates to `dose` over the real line"""
    z = (np.asarray(t, dtype=float) - day) / width
    return dose * np.exp(-0.5 * z * z) / (width * _SQRT_2PI)


def dosing_rate(schedule: DosingSchedule, t: TimeLike) -> Tuple[TimeLike, TimeLike]:
    """(U_T in mm^3/day, U_G in mg/day) at time(s) t"""
    u_t = np.zeros_like(np.asarray(t, dtype=float))
    u_g = np.zeros_like(u_t)
    for injection in schedule.injections:
        if injection.agent == "GEM":
            u_g = u_g + _pulse(t, injection.day, injection.dose, injection.pulse_width)
        else:
            dose = injection.dose * schedule.ot1_volume_equivalent
            u_t = u_t + _pulse(t, injection.day, dose, injection.pulse_width)
    if np.ndim(t) == 0:
        return float(u_t), float(u_g)
    return u_t, u_g
