"""
Synthetic total-volume measurements sampled from a reference trajectory
"""
import logging
from typing import Sequence

import numpy as np

from core.exceptions import InvalidInputError, RangeError
from core.models.run_config import ConstraintSpec
from interp.observations import ObservationSet
from ode_model.trajectory import Trajectory

logger = logging.getLogger("ode_model.observations")


def synthesize_observations(trajectory: Trajectory, sample_days: Sequence[float],
                            noise_level: float, seed: int,
                            anchor_days: Sequence[float] = ()) -> ObservationSet:
    """Totals C+T+M at `sample_days`, each scaled by (1 + noise_level * N(0, 1)).

    Anchor proportions are read from the noiseless trajectory.
    """
    start, stop = trajectory.times[0], trajectory.times[-1]
    for day in list(sample_days) + list(anchor_days):
        if not start <= day <= stop:
            raise RangeError(f"day {day} outside trajectory span [{start}, {stop}]")

    rng = np.random.default_rng(seed)
    days = np.asarray(sorted(sample_days), dtype=float)
    totals = np.array([trajectory.at(day).total_volume for day in days])
    if noise_level > 0:
        totals = totals * (1.0 + noise_level * rng.standard_normal(days.size))

    anchors = []
    for day in anchor_days:
        state = trajectory.at(day)
        total = state.total_volume
        if total <= 0:
            raise InvalidInputError(f"zero total volume at anchor day {day}")
        anchors.append(ConstraintSpec(day=float(day),
                                      proportions=[state.C / total, state.T / total, state.M / total]))

    logger.info(f"Sampled {days.size} observations (noise {noise_level:g}, seed {seed})")
    return ObservationSet(days, totals, anchors)
