"""
`verify`: compare a fit bundle with an oracle trajectory
"""
import os
from typing import Any, Dict, Sequence, Tuple

import numpy as np
import pandas as pd

from cli.commands.base_command import BaseCommand
from cli.persistence import (
    BANDS_FILE, CONFIG_FILE, OBSERVATIONS_FILE, SUMMARY_FILE, VERIFICATION_FILE,
    read_bands, read_json, run_dir, write_json,
)
from core.exceptions import RangeError
from core.models.params import PARAM_NAMES, STATE_NAMES
from core.models.run_config import RunConfig
from interp.normalizer import Normalizer
from interp.observations import read_observations_csv
from interp.spline import SplineCurve
from ode_model.dosing import dosing_rate
from ode_model.system import vector_field
from ode_model.trajectory import read_trajectory_csv

COMPONENTS = ("C", "T", "M", "G", "total", "s_MT")


def relative_l2(learned: np.ndarray, truth: np.ndarray) -> float:
    """||learned - truth|| / ||truth||, or the absolute norm when truth is identically zero"""
    diff = float(np.linalg.norm(learned - truth))
    scale = float(np.linalg.norm(truth))
    return diff / scale if scale > 0 else diff


def resample(times: np.ndarray, values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    if grid[0] < times[0] - 1e-9 or grid[-1] > times[-1] + 1e-9:
        raise RangeError(f"grid [{grid[0]}, {grid[-1]}] outside oracle span [{times[0]}, {times[-1]}]")
    return SplineCurve.fit(times, values)(grid)


class VerifyCommand(BaseCommand):
    def __init__(self, observer=None):
        super().__init__("verify", "Score a fit bundle against a reference trajectory", observer)

    def _mean_parameter_curves(self, bundle_dir: str, seeds: Sequence[int]) -> Dict[str, np.ndarray]:
        frames = [pd.read_csv(os.path.join(run_dir(bundle_dir, s), "parameters.csv")) for s in seeds]
        return {name: np.mean([f[name].to_numpy(dtype=float) for f in frames], axis=0)
                for name in PARAM_NAMES}

    def run(self, bundle_dir: str, oracle_csv: str,
            smt_window: Tuple[float, float] = (8.0, 21.0), **kwargs) -> Dict[str, Any]:
        config = RunConfig.model_validate(read_json(os.path.join(bundle_dir, CONFIG_FILE)))
        summary = read_json(os.path.join(bundle_dir, SUMMARY_FILE))
        bands = read_bands(os.path.join(bundle_dir, BANDS_FILE))
        obs = read_observations_csv(os.path.join(bundle_dir, OBSERVATIONS_FILE))
        oracle = read_trajectory_csv(oracle_csv)

        grid = bands["t"].to_numpy(dtype=float)
        learned = {q: bands[f"{q}_mean"].to_numpy(dtype=float) for q in COMPONENTS}
        truth = {name: oracle.states[:, k] for k, name in enumerate(STATE_NAMES)}
        truth["total"] = oracle.total_volume
        truth["s_MT"] = oracle.s_mt

        notes = []
        same_grid = oracle.times.size == grid.size and np.allclose(oracle.times, grid, rtol=0, atol=1e-9)
        if not same_grid:
            truth = {q: resample(oracle.times, v, grid) for q, v in truth.items()}
            notes.append(f"oracle resampled from {oracle.times.size} to {grid.size} points by cubic spline")

        errors = {q: relative_l2(learned[q], truth[q]) for q in COMPONENTS}
        window = (grid >= smt_window[0]) & (grid <= smt_window[1])
        smt_error = relative_l2(learned["s_MT"][window], truth["s_MT"][window]) if window.any() else None

        predicted = np.interp(obs.days, grid, learned["total"])
        residuals = predicted - obs.volumes
        rmse = float(np.sqrt(np.mean(residuals ** 2)))

        report = {
            "relative_l2": errors,
            "s_MT_window": list(smt_window),
            "s_MT_window_relative_l2": smt_error,
            "data_residuals": {
                "days": obs.days.tolist(),
                "residuals": residuals.tolist(),
                "rmse": rmse,
                "rmse_relative_to_max": rmse / float(np.max(obs.volumes)),
            },
            "ode_residual": self._ode_residual(config, bundle_dir, summary["seeds"], grid, learned, obs),
            "constraint_errors": self._constraint_errors(config, grid, learned),
            "notes": notes,
        }
        write_json(report, os.path.join(bundle_dir, VERIFICATION_FILE))
        self.logger.info(
            f"C+T+M relative L2 {errors['total']:.4f}, data RMSE {rmse:.4g}, "
            f"s_MT window error {smt_error if smt_error is None else round(smt_error, 4)}"
        )
        return report

    def _ode_residual(self, config: RunConfig, bundle_dir: str, seeds: Sequence[int],
                      grid: np.ndarray, learned: Dict[str, np.ndarray], obs) -> float:
        """Mean over the grid of the squared normalized residual of the ensemble-mean curves"""
        coeffs = self._mean_parameter_curves(bundle_dir, seeds)
        gem_total = config.dosing.total_dose("GEM")
        drug_scale = config.drug_scale or (gem_total if gem_total > 0 else 1.0)
        normalizer = Normalizer(config.t0, config.tF, float(np.max(obs.volumes)), drug_scale)
        scales = normalizer.state_scales()

        states = [learned[name] for name in STATE_NAMES]
        u_t, u_g = dosing_rate(config.dosing, grid)
        derivs = vector_field(*states, coeffs, coeffs["s_MT"], u_t, u_g)
        squared = np.zeros_like(grid)
        for k, (values, f) in enumerate(zip(states, derivs)):
            slope = SplineCurve.fit(grid, values)(grid, derivative=1)
            squared += ((slope - f) * normalizer.duration / scales[k]) ** 2
        return float(np.mean(squared))

    def _constraint_errors(self, config: RunConfig, grid: np.ndarray,
                           learned: Dict[str, np.ndarray]) -> Dict[str, Any]:
        entries = []
        for label, spec in [("ic", config.ic)] + [(f"histology[{i}]", s) for i, s in enumerate(config.histology)]:
            values = np.array([np.interp(spec.day, grid, learned[q]) for q in ("C", "T", "M")])
            proportions = values / values.sum()
            error = np.abs(proportions - np.asarray(spec.proportions))
            entries.append({
                "anchor": label, "day": spec.day,
                "learned": proportions.tolist(), "target": list(spec.proportions),
                "max_abs_error": float(error.max()),
            })
        return {"anchors": entries, "max_abs_error": max(e["max_abs_error"] for e in entries)}
