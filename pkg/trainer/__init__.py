"""
Training of the physics-informed surrogates, single seed and ensemble
"""
from trainer.adam import AdamState, adam_step
from trainer.ensemble import Band, EnsembleResult, compute_bands, run_ensemble
from trainer.problem import BoundProblem, PinnProblem
from trainer.train import TrainingRun, train

__all__ = [
    "AdamState", "Band", "BoundProblem", "EnsembleResult", "PinnProblem", "TrainingRun",
    "adam_step", "compute_bands", "run_ensemble", "train",
]
