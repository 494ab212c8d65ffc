"""
Single-seed training loop
"""
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from autodiff.tape import Tape
from core.exceptions import NumericError, TrainingAbortedError
from core.models.run_config import RunConfig, config_hash
from interp.observations import ObservationSet
from losses.weighting import LossBreakdown
from neural.checkpoint import load_checkpoint, save_checkpoint, unflatten_into
from ode_model.trajectory import Trajectory
from trainer.adam import AdamState, adam_step
from trainer.problem import PinnProblem

logger = logging.getLogger("trainer")


@dataclass
class TrainingRun:
    """Outcome of one seed"""
    seed: int
    loss_history: List[LossBreakdown]
    total_trace: np.ndarray
    trajectory: Trajectory
    parameter_curves: Dict[str, np.ndarray]
    learned_constants: Dict[str, float]
    rejected_steps: List[int] = field(default_factory=list)
    epochs_completed: int = 0
    wall_time_s: float = 0.0
    initial_losses: Optional[LossBreakdown] = None
    problem: Optional[PinnProblem] = None

    @property
    def final_losses(self) -> Dict[str, float]:
        if self.loss_history:
            return self.loss_history[-1].as_dict()
        return self.initial_losses.as_dict() if self.initial_losses is not None else {}


def checkpoint_path(checkpoint_dir: str, seed: int) -> str:
    return os.path.join(checkpoint_dir, f"seed_{seed}.npz")


def _restore(problem: PinnProblem, state: AdamState, path: str) -> Dict[str, Any]:
    flat, m, v, step, header = load_checkpoint(path)
    if header.get("config_hash") != config_hash(problem.config):
        logger.warning(f"Checkpoint {path} was written for a different configuration")
    params = problem.parameters()
    unflatten_into(flat, params, path)
    unflatten_into(m, state.m, path)
    unflatten_into(v, state.v, path)
    state.step = step
    return header


def train(obs: ObservationSet, config: RunConfig, seed: int, observer=None,
          checkpoint_dir: Optional[str] = None, resume: bool = False) -> TrainingRun:
    """Minimize the weighted loss with Adam for `config.training.epochs` epochs.

    The loss history holds one breakdown every `log_interval` epochs plus one for the
    last epoch when `epochs` is not a multiple of `log_interval`, so the history always
    ends with the final loss.

    Raises TrainingAbortedError once the total loss has been non-finite or above the
    divergence threshold for `divergence_patience` consecutive epochs.
    """
    started = time.perf_counter()
    settings = config.training
    problem = PinnProblem(obs, config, seed)
    params = problem.parameters()
    state = AdamState.zeros(params, settings)

    history: List[LossBreakdown] = []
    totals: List[float] = []
    rejected: List[int] = []
    start_epoch = 0
    if resume and checkpoint_dir:
        path = checkpoint_path(checkpoint_dir, seed)
        if os.path.exists(path):
            header = _restore(problem, state, path)
            start_epoch = int(header.get("epoch", 0))
            history = [LossBreakdown(**row) for row in header.get("loss_history", [])]
            totals = list(header.get("total_trace", []))
            rejected = list(header.get("rejected_steps", []))
            logger.info(f"Seed {seed}: resumed from epoch {start_epoch}")
        else:
            logger.info(f"Seed {seed}: no checkpoint at {path}, starting fresh")

    if observer is not None:
        observer.log_run_start(seed, config_hash(config))

    tape = Tape()
    bound = problem.bind(tape)
    mark = tape.checkpoint()
    bad_streak = 0
    last: Optional[LossBreakdown] = None

    for epoch in range(start_epoch + 1, settings.epochs + 1):
        tape.reset(mark)
        try:
            total, breakdown = problem.evaluate(bound, epoch=epoch)
        except NumericError as exc:
            logger.warning(f"Seed {seed}, epoch {epoch}: {exc}")
            total, breakdown = None, None

        value = breakdown.total if breakdown is not None else float("nan")
        if not np.isfinite(value) or value > settings.divergence_threshold:
            bad_streak += 1
            if bad_streak >= settings.divergence_patience:
                diagnostics = {
                    "last_total": value,
                    "last_finite": last.as_dict() if last is not None else None,
                    "threshold": settings.divergence_threshold,
                }
                if observer is not None:
                    observer.log_error(seed, "diverged", diagnostics)
                raise TrainingAbortedError(
                    "loss diverged", seed=seed, epoch=epoch,
                    diagnostics=diagnostics,
                )
        else:
            bad_streak = 0
            last = breakdown
        totals.append(value)

        if total is not None:
            grads = tape.backward(total, bound.leaves)
            if not adam_step(params, grads, state):
                rejected.append(epoch)
                logger.warning(f"Seed {seed}, epoch {epoch}: non-finite gradient, step rejected")
        else:
            rejected.append(epoch)

        if breakdown is not None and (epoch % settings.log_interval == 0 or epoch == settings.epochs):
            history.append(breakdown)
            if observer is not None:
                observer.log_losses(seed, epoch, breakdown)
            logger.info(
                f"Seed {seed} epoch {epoch}: total={breakdown.total:.4e} L_r={breakdown.L_r:.3e} "
                f"L_d={breakdown.L_d:.3e} L_IC={breakdown.L_IC:.3e} L_bc={breakdown.L_bc:.3e}"
            )

        if checkpoint_dir and settings.checkpoint_interval and epoch % settings.checkpoint_interval == 0:
            header = problem.header()
            header.update({
                "config_hash": config_hash(config),
                "epoch": epoch,
                "loss_history": [b.as_dict() for b in history],
                "total_trace": [float(x) for x in totals],
                "rejected_steps": rejected,
            })
            save_checkpoint(checkpoint_path(checkpoint_dir, seed), params, state.m, state.v,
                            state.step, header)

    initial = None
    if not history and settings.epochs == start_epoch:
        # nothing trained in this call: report the loss of the current weights
        tape.reset(mark)
        _, initial = problem.evaluate(bound, epoch=start_epoch)

    days = np.linspace(config.t0, config.tF, settings.eval_points)
    run = TrainingRun(
        seed=seed,
        loss_history=history,
        total_trace=np.asarray(totals, dtype=float),
        trajectory=problem.dense_trajectory(settings.eval_points),
        parameter_curves=problem.parameter_curves(days),
        learned_constants=problem.learned_constants(),
        rejected_steps=rejected,
        epochs_completed=settings.epochs,
        wall_time_s=time.perf_counter() - started,
        initial_losses=initial,
        problem=problem,
    )
    if observer is not None:
        observer.log_run_end(seed, {"final_losses": run.final_losses,
                                    "learned_constants": run.learned_constants,
                                    "wall_time_s": run.wall_time_s}, success=True)
    logger.info(f"Seed {seed}: finished {settings.epochs} epochs in {run.wall_time_s:.1f}s")
    return run
