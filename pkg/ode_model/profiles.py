"""
Ground-truth s_MT(t) curves used to generate synthetic data
"""
from typing import Callable, Union

import numpy as np
from scipy.special import expit

from core.models.params import ConstantProfile, PiecewiseLinearProfile, SigmoidProfile

TimeLike = Union[float, np.ndarray]


def make_profile(spec: Union[ConstantProfile, SigmoidProfile, PiecewiseLinearProfile]) -> Callable[[TimeLike], TimeLike]:
    if isinstance(spec, ConstantProfile):
        return lambda t: spec.value + 0.0 * np.asarray(t, dtype=float)
    if isinstance(spec, SigmoidProfile):
        # decreasing from `high` to `low` around `midpoint`
        return lambda t: spec.low + (spec.high - spec.low) * expit(
            -spec.steepness * (np.asarray(t, dtype=float) - spec.midpoint)
        )
    days = np.asarray(spec.days, dtype=float)
    values = np.asarray(spec.values, dtype=float)
    return lambda t: np.interp(t, days, values)
