"""
Error types raised across the tvpinn packages
"""
from typing import Any, Dict, Optional


class TvPinnError(Exception):
    """Base class for every error the toolkit raises on purpose"""


class AutodiffError(TvPinnError):
    """The recorded graph broke an invariant (e.g. a parent recorded after its child)"""


class NumericError(TvPinnError):
    """A computation produced NaN or infinity"""

    def __init__(self, message: str, layer: Optional[int] = None, location: Optional[float] = None):
        super().__init__(message)
        self.layer = layer
        self.location = location


class ConfigurationError(TvPinnError):
    """Invalid configuration; `field` is the dotted path of the offending entry"""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class DataFormatError(TvPinnError):
    """Malformed input file; `line` is 1-based and counts the header"""

    def __init__(self, message: str, line: Optional[int] = None, path: str = ""):
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.path = path


class CheckpointError(TvPinnError):
    """A checkpoint does not fit the model it is restored into"""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class RangeError(TvPinnError):
    """A day or time lies outside the modelled window"""


class InvalidInputError(TvPinnError):
    """Inputs violate a precondition (duplicates, wrong shapes)"""


class InsufficientDataError(InvalidInputError):
    """Too few points for the requested fit"""


class SolverError(TvPinnError):
    """The forward solver produced a non-finite state"""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t={time:.6g}")
        self.time = time


class TrainingAbortedError(TvPinnError):
    """A training run diverged and was stopped"""

    def __init__(self, message: str, seed: int, epoch: int, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(f"seed {seed}, epoch {epoch}: {message}")
        self.seed = seed
        self.epoch = epoch
        self.diagnostics = diagnostics or {}


class EnsembleFailedError(TvPinnError):
    """Too few ensemble members survived to build uncertainty bands"""

    def __init__(self, message: str, aborted: Optional[Dict[int, str]] = None):
        super().__init__(message)
        self.aborted = aborted or {}
