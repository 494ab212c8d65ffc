"""
`fit`: ingest observations, train the ensemble and write a result bundle
"""
import os
import time
from typing import Any, Dict, List, Optional

from cli.commands.base_command import BaseCommand
from cli.persistence import read_anchors, write_bundle
from core.exceptions import ConfigurationError, EnsembleFailedError
from core.models.run_config import ConstraintSpec, RunConfig, config_hash
from interp.observations import read_observations_csv
from trainer.ensemble import EnsembleResult, run_ensemble


def resolve_path(path: str, config_path: str) -> str:
    """Relative paths are tried against the working directory, then the config's directory"""
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(os.path.dirname(os.path.abspath(config_path)), path)


def apply_anchors(config: RunConfig, anchors: List[ConstraintSpec]) -> RunConfig:
    """Earliest anchor becomes the initial condition, the rest the histology constraints"""
    if not anchors:
        raise ConfigurationError("anchors file holds no anchors", field="anchors_path")
    ordered = sorted(anchors, key=lambda a: a.day)
    return RunConfig.model_validate({
        **config.model_dump(mode="json"),
        "ic": ordered[0].model_dump(),
        "histology": [a.model_dump() for a in ordered[1:]],
    })


def run_results(result: EnsembleResult) -> List[Dict[str, Any]]:
    """One row per seed, surviving and aborted, for the observer's run report"""
    rows: List[Dict[str, Any]] = [
        {"seed": run.seed, "success": True, "wall_time_s": run.wall_time_s,
         "total": run.final_losses.get("total", float("nan"))}
        for run in result.runs
    ]
    rows.extend({"seed": seed, "success": False, "wall_time_s": 0.0, "error": reason}
                for seed, reason in sorted(result.aborted.items()))
    return rows


class FitCommand(BaseCommand):
    def __init__(self, observer=None, max_workers: int = 1):
        super().__init__("fit", "Train the physics-informed ensemble on observed volumes", observer)
        self.max_workers = max_workers

    def run(self, config_path: str, seed_override: Optional[int] = None,
            epochs_override: Optional[int] = None, out_dir: Optional[str] = None,
            resume: bool = False, **kwargs) -> Dict[str, Any]:
        overrides: Dict[str, Any] = {}
        if seed_override is not None:
            overrides["seeds"] = [seed_override]
        if epochs_override is not None:
            overrides["training"] = {"epochs": epochs_override}
        config = self.load_config(config_path, RunConfig, overrides)

        if config.anchors_path:
            config = apply_anchors(config, read_anchors(resolve_path(config.anchors_path, config_path)))
        obs = read_observations_csv(resolve_path(config.data_path, config_path))

        bundle_dir = out_dir or config.output_dir
        checkpoint_dir = None
        if config.training.checkpoint_interval or resume:
            checkpoint_dir = os.path.join(bundle_dir, "checkpoints")

        digest = config_hash(config)
        self.logger.info(
            f"Fitting {len(obs)} observations with seeds {config.seeds} "
            f"({config.training.epochs} epochs, config {digest[:12]})"
        )
        started = time.perf_counter()
        try:
            result = run_ensemble(
                obs, config, max_workers=self.max_workers, observer=self.observer,
                checkpoint_dir=checkpoint_dir, resume=resume,
            )
        except EnsembleFailedError as e:
            self.logger.error(f"Ensemble failed: {e} (aborted: {e.aborted})")
            raise

        summary = write_bundle(
            result, config.model_dump(mode="json"), digest, obs, bundle_dir,
            wall_time_s=time.perf_counter() - started,
        )
        self.log_event("fit_complete", {"bundle": bundle_dir, "seeds": summary["seeds"],
                                        "aborted_seeds": list(summary["aborted_seeds"])})
        report = None
        if self.observer is not None:
            report = self.observer.create_run_report(run_results(result))
        return dict(summary, bundle_dir=bundle_dir, run_report=report)
