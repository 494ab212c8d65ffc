"""
Multi-seed ensembles and their mean +/- one standard deviation bands
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import EnsembleFailedError, TrainingAbortedError
from core.models.run_config import RunConfig
from interp.observations import ObservationSet
from trainer.train import TrainingRun, train

logger = logging.getLogger("trainer.ensemble")

BAND_QUANTITIES = ("C", "T", "M", "G", "total", "s_MT")
MIN_SURVIVORS = 3


@dataclass(frozen=True)
class Band:
    mean: np.ndarray
    std: np.ndarray

    @property
    def lower(self) -> np.ndarray:
        return self.mean - self.std

    @property
    def upper(self) -> np.ndarray:
        return self.mean + self.std


@dataclass
class EnsembleResult:
    times: np.ndarray
    runs: List[TrainingRun]
    bands: Dict[str, Band]
    aborted: Dict[int, str] = field(default_factory=dict)

    @property
    def seeds(self) -> List[int]:
        return [run.seed for run in self.runs]

    def mean_constants(self) -> Dict[str, float]:
        names = self.runs[0].learned_constants.keys()
        return {name: float(np.mean([r.learned_constants[name] for r in self.runs])) for name in names}


def member_curves(run: TrainingRun) -> Dict[str, np.ndarray]:
    traj = run.trajectory
    return {
        "C": traj.states[:, 0], "T": traj.states[:, 1], "M": traj.states[:, 2],
        "G": traj.states[:, 3], "total": traj.total_volume, "s_MT": traj.s_mt,
    }


def compute_bands(runs: Sequence[TrainingRun]) -> Dict[str, Band]:
    """Pointwise mean and population standard deviation across members"""
    curves = [member_curves(run) for run in runs]
    bands = {}
    for name in BAND_QUANTITIES:
        stacked = np.stack([c[name] for c in curves])
        bands[name] = Band(mean=stacked.mean(axis=0), std=stacked.std(axis=0))
    return bands


Event = Tuple[str, tuple, Dict[str, Any]]


class EventRecorder:
    """Stands in for the observer inside a worker process; the parent replays the events"""

    def __init__(self):
        self.events: List[Event] = []

    def _record(self, method: str, args: tuple, kwargs: Dict[str, Any]) -> None:
        self.events.append((method, args, kwargs))

    def log_run_start(self, *args, **kwargs):
        self._record("log_run_start", args, kwargs)

    def log_losses(self, *args, **kwargs):
        self._record("log_losses", args, kwargs)

    def log_error(self, *args, **kwargs):
        self._record("log_error", args, kwargs)

    def log_run_end(self, *args, **kwargs):
        self._record("log_run_end", args, kwargs)


def replay(events: Sequence[Event], observer) -> None:
    for method, args, kwargs in events:
        getattr(observer, method)(*args, **kwargs)


def _train_member(args: Tuple[ObservationSet, RunConfig, int, Optional[str], bool]
                  ) -> Tuple[int, Optional[TrainingRun], Optional[str], List[Event]]:
    obs, config, seed, checkpoint_dir, resume = args
    recorder = EventRecorder()
    try:
        run = train(obs, config, seed, observer=recorder, checkpoint_dir=checkpoint_dir, resume=resume)
    except TrainingAbortedError as exc:
        return seed, None, str(exc), recorder.events
    # profile callables inside the problem do not cross process boundaries
    run.problem = None
    return seed, run, None, recorder.events


def run_ensemble(obs: ObservationSet, config: RunConfig, seeds: Optional[Sequence[int]] = None,
                 max_workers: int = 1, observer=None, checkpoint_dir: Optional[str] = None,
                 resume: bool = False) -> EnsembleResult:
    """Train one member per seed and summarize; results are always in seed order"""
    seeds = list(config.seeds if seeds is None else seeds)
    runs: Dict[int, TrainingRun] = {}
    aborted: Dict[int, str] = {}

    if max_workers > 1 and len(seeds) > 1:
        logger.info(f"Training {len(seeds)} seeds on {max_workers} worker processes")
        jobs = [(obs, config, seed, checkpoint_dir, resume) for seed in seeds]
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            for seed, run, error, events in pool.map(_train_member, jobs):
                if observer is not None:
                    replay(events, observer)
                if run is None:
                    aborted[seed] = error
                else:
                    runs[seed] = run
    else:
        for seed in seeds:
            try:
                runs[seed] = train(obs, config, seed, observer=observer,
                                   checkpoint_dir=checkpoint_dir, resume=resume)
            except TrainingAbortedError as exc:
                aborted[seed] = str(exc)

    for seed, reason in aborted.items():
        logger.warning(f"Seed {seed} aborted: {reason}")

    survivors = [runs[s] for s in seeds if s in runs]
    if not survivors or (aborted and len(survivors) < MIN_SURVIVORS):
        raise EnsembleFailedError(
            f"{len(survivors)} of {len(seeds)} seeds survived, need at least {MIN_SURVIVORS}",
            aborted=aborted,
        )

    result = EnsembleResult(
        times=survivors[0].trajectory.times,
        runs=survivors,
        bands=compute_bands(survivors),
        aborted=aborted,
    )
    if observer is not None:
        observer.log_ensemble({
            "seeds": result.seeds,
            "aborted_seeds": sorted(aborted),
            "mean_constants": result.mean_constants() if survivors[0].learned_constants else {},
        })
    return result
