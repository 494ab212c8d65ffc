"""
Result bundles and the other files the commands read and write.

Bundle layout (`fit`):

    config.json             validated run configuration
    observations.csv        the data the run was fitted to
    runs/seed_<s>/trajectory.csv, loss_history.csv, parameters.csv
    ensemble_bands.csv      t, then <q>_mean,<q>_lower,<q>_upper per quantity
    summary.json
    checkpoints/seed_<s>.npz  (when checkpointing is enabled)
"""
import json
import logging
import os
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from core.exceptions import DataFormatError
from core.models.params import DosingSchedule
from core.models.run_config import ConstraintSpec
from interp.observations import ObservationSet, write_observations_csv
from losses.weighting import LossBreakdown
from ode_model.dosing import dosing_rate
from ode_model.trajectory import FLOAT_FORMAT, Trajectory, write_trajectory_csv
from trainer.ensemble import BAND_QUANTITIES, EnsembleResult
from trainer.train import TrainingRun

logger = logging.getLogger("persistence")

LOSS_COLUMNS = ["epoch", "L_r", "L_d", "L_IC", "L_bc", "w_r", "w_d", "w_IC", "w_bc", "total"]
SUMMARY_FILE = "summary.json"
BANDS_FILE = "ensemble_bands.csv"
CONFIG_FILE = "config.json"
OBSERVATIONS_FILE = "observations.csv"
VERIFICATION_FILE = "verification.json"


def _write_frame(frame: pd.DataFrame, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_json(data: Any, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(e.msg, line=e.lineno, path=path) from e
    except UnicodeDecodeError as e:
        raise DataFormatError(f"not valid UTF-8 text ({e.reason})", path=path) from e


def run_dir(bundle_dir: str, seed: int) -> str:
    return os.path.join(bundle_dir, "runs", f"seed_{seed}")


def write_loss_history(history: List[LossBreakdown], path: str) -> str:
    frame = pd.DataFrame([b.as_dict() for b in history], columns=LOSS_COLUMNS)
    return _write_frame(frame, path)


def read_loss_history(path: str) -> List[LossBreakdown]:
    frame = pd.read_csv(path)
    if list(frame.columns) != LOSS_COLUMNS:
        raise DataFormatError(f"expected header {','.join(LOSS_COLUMNS)}", line=1, path=path)
    return [
        LossBreakdown(**{k: (int(v) if k == "epoch" else float(v)) for k, v in row.items()})
        for row in frame.to_dict(orient="records")
    ]


def write_bands(result: EnsembleResult, path: str) -> str:
    columns: Dict[str, np.ndarray] = {"t": result.times}
    for name in BAND_QUANTITIES:
        band = result.bands[name]
        columns[f"{name}_mean"] = band.mean
        columns[f"{name}_lower"] = band.lower
        columns[f"{name}_upper"] = band.upper
    return _write_frame(pd.DataFrame(columns), path)


def read_bands(path: str) -> pd.DataFrame:
    frame = pd.read_csv(path)
    expected = ["t"] + [f"{q}_{s}" for q in BAND_QUANTITIES for s in ("mean", "lower", "upper")]
    if list(frame.columns) != expected:
        raise DataFormatError("unexpected band CSV header", line=1, path=path)
    return frame


def write_run(run: TrainingRun, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    write_trajectory_csv(run.trajectory, os.path.join(directory, "trajectory.csv"))
    write_loss_history(run.loss_history, os.path.join(directory, "loss_history.csv"))
    params = pd.DataFrame(run.parameter_curves)
    params.insert(0, "t", run.trajectory.times)
    _write_frame(params, os.path.join(directory, "parameters.csv"))


def write_bundle(result: EnsembleResult, config_json: Dict[str, Any], config_hash: str,
                 obs: ObservationSet, bundle_dir: str, wall_time_s: float) -> Dict[str, Any]:
    """Write every artifact of a fit; returns the summary"""
    os.makedirs(bundle_dir, exist_ok=True)
    write_json(config_json, os.path.join(bundle_dir, CONFIG_FILE))
    write_observations_csv(obs, os.path.join(bundle_dir, OBSERVATIONS_FILE))
    for run in result.runs:
        write_run(run, run_dir(bundle_dir, run.seed))
    write_bands(result, os.path.join(bundle_dir, BANDS_FILE))

    summary = {
        "final_losses": {str(run.seed): run.final_losses for run in result.runs},
        "learned_constants": {str(run.seed): run.learned_constants for run in result.runs},
        "mean_learned_constants": result.mean_constants(),
        "seeds": result.seeds,
        "aborted_seeds": {str(seed): reason for seed, reason in sorted(result.aborted.items())},
        "wall_time_s": wall_time_s,
        "config_hash": config_hash,
    }
    write_json(summary, os.path.join(bundle_dir, SUMMARY_FILE))
    logger.info(f"Bundle written to {bundle_dir} ({len(result.runs)} members)")
    return summary


def write_dosing_csv(schedule: DosingSchedule, times: np.ndarray, path: str) -> str:
    u_t, u_g = dosing_rate(schedule, np.asarray(times, dtype=float))
    return _write_frame(pd.DataFrame({"t": times, "U_T": u_t, "U_G": u_g}), path)


def write_anchors(anchors: List[ConstraintSpec], path: str) -> str:
    return write_json([a.model_dump() for a in anchors], path)


def read_anchors(path: str) -> List[ConstraintSpec]:
    data = read_json(path)
    if not isinstance(data, list):
        raise DataFormatError("anchors file must hold a list", line=1, path=path)
    return [ConstraintSpec(**entry) for entry in data]


def write_simulation(trajectory: Trajectory, obs: ObservationSet, schedule: DosingSchedule,
                     out_dir: str) -> Dict[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "trajectory": write_trajectory_csv(trajectory, os.path.join(out_dir, "trajectory.csv")),
        "observations": write_observations_csv(obs, os.path.join(out_dir, OBSERVATIONS_FILE)),
        "dosing": write_dosing_csv(schedule, trajectory.times, os.path.join(out_dir, "dosing.csv")),
        "anchors": write_anchors(obs.anchors, os.path.join(out_dir, "anchors.json")),
    }
    logger.info(f"Simulation written to {out_dir}")
    return paths
