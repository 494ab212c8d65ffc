"""
Affine maps between physical and normalized units
"""
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from core.exceptions import RangeError
from interp.observations import ObservationSet

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Normalizer:
    """Time [t0, tF] -> [0, 1]; volumes / volume_scale; drug amounts / drug_scale"""
    t0: float
    tF: float
    volume_scale: float
    drug_scale: float = 1.0

    def __post_init__(self):
        if not self.tF > self.t0:
            raise RangeError(f"degenerate time range [{self.t0}, {self.tF}]")
        if self.volume_scale <= 0 or self.drug_scale <= 0:
            raise RangeError("scales must be positive")

    @property
    def duration(self) -> float:
        return self.tF - self.t0

    def time(self, t: ArrayLike) -> ArrayLike:
        return (np.asarray(t, dtype=float) - self.t0) / self.duration

    def days(self, tau: ArrayLike) -> ArrayLike:
        return self.t0 + np.asarray(tau, dtype=float) * self.duration

    def volume(self, v: ArrayLike) -> ArrayLike:
        return np.asarray(v, dtype=float) / self.volume_scale

    def physical_volume(self, v: ArrayLike) -> ArrayLike:
        return np.asarray(v, dtype=float) * self.volume_scale

    def state_scales(self) -> np.ndarray:
        """Physical units per normalized unit for (C, T, M, G)"""
        return np.array([self.volume_scale] * 3 + [self.drug_scale])


def normalize(obs: Union[ObservationSet, Tuple[np.ndarray, np.ndarray]],
              t0: Optional[float] = None, tF: Optional[float] = None,
              drug_scale: float = 1.0) -> Tuple[np.ndarray, np.ndarray, Normalizer]:
    """Map times to [0, 1] and volumes to units of the largest observed volume"""
    if isinstance(obs, ObservationSet):
        days, volumes = obs.days, obs.volumes
    else:
        days, volumes = (np.asarray(a, dtype=float) for a in obs)
    normalizer = Normalizer(
        t0=float(days[0]) if t0 is None else t0,
        tF=float(days[-1]) if tF is None else tF,
        volume_scale=float(np.max(volumes)),
        drug_scale=drug_scale,
    )
    return normalizer.time(days), normalizer.volume(volumes), normalizer
