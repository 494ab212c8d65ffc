"""
Sparse total-volume observations and their CSV form
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import pandas as pd

from core.exceptions import DataFormatError, InvalidInputError
from core.models.run_config import ConstraintSpec

logger = logging.getLogger("interp.observations")

OBSERVATION_COLUMNS = ["day", "total_volume"]


@dataclass(frozen=True)
class ObservationSet:
    """(day, total volume) pairs plus proportion anchors"""
    days: np.ndarray
    volumes: np.ndarray
    anchors: List[ConstraintSpec] = field(default_factory=list)

    def __post_init__(self):
        if self.days.shape != self.volumes.shape or self.days.ndim != 1:
            raise InvalidInputError("days and volumes must be 1-D arrays of equal length")
        if np.any(np.diff(self.days) <= 0):
            raise InvalidInputError("observation days must be strictly increasing")
        if np.any(self.volumes <= 0):
            raise InvalidInputError("observed volumes must be positive")

    def __len__(self) -> int:
        return int(self.days.size)

    def with_anchors(self, anchors: List[ConstraintSpec]) -> "ObservationSet":
        return ObservationSet(self.days, self.volumes, list(anchors))


def read_observations_csv(path: str) -> ObservationSet:
    """Parse `day,total_volume`; errors name the 1-based line (header is line 1)"""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.ParserError as e:
        raise DataFormatError(str(e), path=path) from e
    except pd.errors.EmptyDataError as e:
        raise DataFormatError("file is empty", line=1, path=path) from e
    except UnicodeDecodeError as e:
        raise DataFormatError(f"not valid UTF-8 text ({e.reason})", path=path) from e

    if [c.strip() for c in frame.columns] != OBSERVATION_COLUMNS:
        raise DataFormatError(f"expected header '{','.join(OBSERVATION_COLUMNS)}', "
                              f"got '{','.join(frame.columns)}'", line=1, path=path)
    if frame.empty:
        raise DataFormatError("no observations", line=2, path=path)

    days, volumes = [], []
    for row, (day_text, volume_text) in enumerate(frame.itertuples(index=False, name=None)):
        line = row + 2
        try:
            day, volume = float(day_text), float(volume_text)
        except ValueError:
            raise DataFormatError(f"non-numeric value '{day_text},{volume_text}'", line=line, path=path)
        if not (np.isfinite(day) and np.isfinite(volume)):
            raise DataFormatError("non-finite value", line=line, path=path)
        if days and day <= days[-1]:
            raise DataFormatError(f"day {day:g} is not after previous day {days[-1]:g}", line=line, path=path)
        if volume <= 0:
            raise DataFormatError(f"volume must be positive, got {volume:g}", line=line, path=path)
        days.append(day)
        volumes.append(volume)

    logger.info(f"Loaded {len(days)} observations from {path}")
    return ObservationSet(np.array(days), np.array(volumes))


def write_observations_csv(obs: ObservationSet, path: str) -> str:
    frame = pd.DataFrame({"day": obs.days, "total_volume": obs.volumes})
    frame.to_csv(path, index=False, float_format="%.9g", lineterminator="\n")
    return path
