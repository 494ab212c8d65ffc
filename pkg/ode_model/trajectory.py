"""
State and trajectory value types, with CSV export
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from core.exceptions import DataFormatError, RangeError

TRAJECTORY_COLUMNS = ["t", "C", "T", "M", "G", "s_MT"]
FLOAT_FORMAT = "%.9g"


@dataclass(frozen=True)
class SystemState:
    """C, T, M in mm^3 and G in mg at one time point"""
    C: float
    T: float
    M: float
    G: float

    def as_array(self) -> np.ndarray:
        return np.array([self.C, self.T, self.M, self.G], dtype=float)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "SystemState":
        return cls(*(float(v) for v in values))

    @property
    def total_volume(self) -> float:
        return self.C + self.T + self.M


@dataclass(frozen=True)
class Trajectory:
    """States (n, 4) and the s_MT value used at each of n strictly increasing times"""
    times: np.ndarray
    states: np.ndarray
    s_mt: np.ndarray

    def __post_init__(self):
        if self.states.shape != (self.times.size, 4) or self.s_mt.shape != self.times.shape:
            raise ValueError("trajectory arrays have inconsistent shapes")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    @property
    def total_volume(self) -> np.ndarray:
        return self.states[:, :3].sum(axis=1)

    def at(self, day: float, tol: float = 1e-9) -> SystemState:
        """State at `day`: the grid value when `day` is a grid point, else linear interpolation"""
        span = self.times[-1] - self.times[0]
        if day < self.times[0] - tol * span or day > self.times[-1] + tol * span:
            raise RangeError(f"day {day} outside [{self.times[0]}, {self.times[-1]}]")
        index = int(np.argmin(np.abs(self.times - day)))
        if abs(self.times[index] - day) <= tol * max(span, 1.0):
            return SystemState.from_array(self.states[index])
        return SystemState.from_array(
            np.array([np.interp(day, self.times, self.states[:, k]) for k in range(4)])
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=["C", "T", "M", "G"])
        frame.insert(0, "t", self.times)
        frame["s_MT"] = self.s_mt
        return frame

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "Trajectory":
        return cls(
            times=frame["t"].to_numpy(dtype=float),
            states=frame[["C", "T", "M", "G"]].to_numpy(dtype=float),
            s_mt=frame["s_MT"].to_numpy(dtype=float),
        )


def write_trajectory_csv(trajectory: Trajectory, path: str) -> str:
    trajectory.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_trajectory_csv(path: str, columns: Optional[list] = None) -> Trajectory:
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataFormatError(f"unreadable trajectory: {e}", path=path) from e
    expected = columns or TRAJECTORY_COLUMNS
    if list(frame.columns) != expected:
        raise DataFormatError(f"expected header {','.join(expected)}, got {','.join(frame.columns)}",
                              line=1, path=path)
    return Trajectory.from_frame(frame)
