"""
Observation ingestion, spline augmentation and normalization
"""
from interp.normalizer import Normalizer, normalize
from interp.observations import ObservationSet, read_observations_csv, write_observations_csv
from interp.spline import SplineCurve, augment, collocation_days, fit_spline

__all__ = [
    "Normalizer", "ObservationSet", "SplineCurve", "augment", "collocation_days", "fit_spline",
    "normalize", "read_observations_csv", "write_observations_csv",
]
