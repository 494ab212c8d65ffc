"""
Comet integration for training runs: loss curves, aborts and ensemble summaries
"""
import logging
from datetime import datetime
from typing import Any, Dict, List, Optional

import pandas as pd

try:
    from comet_llm import log_experiment
    COMET_AVAILABLE = True
except ImportError:
    COMET_AVAILABLE = False

    def log_experiment(*args, **kwargs):
        pass


class TrainingObserver:
    """Forwards training events to Comet when it is configured, otherwise to the log"""

    def __init__(self, api_key: Optional[str] = None, workspace: Optional[str] = None,
                 project: str = "tvpinn"):
        self.logger = logging.getLogger("comet_observer")
        self.api_key = api_key
        self.workspace = workspace
        self.project = project
        self.enabled = COMET_AVAILABLE and bool(api_key)

        if not api_key:
            self.logger.debug("COMET_API_KEY not set, training events go to the log only")

    def _send(self, name: str, data: Dict[str, Any]) -> None:
        payload = dict(data, timestamp=datetime.now().isoformat())
        if not self.enabled:
            self.logger.debug(f"{name}: {payload}")
            return
        try:
            log_experiment(
                name=name,
                data=payload,
                api_key=self.api_key,
                workspace=self.workspace,
                project=self.project,
            )
        except Exception as e:
            self.logger.warning(f"Failed to log {name}: {e}")

    def log_run_start(self, seed: int, config_hash: str):
        self._send(f"seed_{seed}_start", {"seed": seed, "config_hash": config_hash})

    def log_losses(self, seed: int, epoch: int, breakdown):
        self._send(f"seed_{seed}_losses", dict(breakdown.as_dict(), seed=seed, epoch=epoch))

    def log_run_end(self, seed: int, summary: Dict[str, Any], success: bool):
        self._send(f"seed_{seed}_end", dict(summary, seed=seed, success=success))

    def log_error(self, seed: int, error: str, context: Dict[str, Any]):
        self._send(f"seed_{seed}_error", {
            "seed": seed, "error": error, "context": context, "severity": "error",
        })

    def log_ensemble(self, summary: Dict[str, Any]):
        self._send("ensemble", summary)

    def log_command(self, command: str, event: str, context: Dict[str, Any]):
        self._send(f"command_{command}", dict(context, command=command, event=event))

    def create_run_report(self, run_results: List[Dict[str, Any]]) -> Dict[str, Any]:
        """Aggregate per-seed summaries (seed, success, wall_time_s, total) into one report"""
        if not run_results:
            return {"runs": 0}
        frame = pd.DataFrame(run_results)
        report = {
            "runs": int(len(frame)),
            "successful_runs": int(frame["success"].sum()),
            "failed_runs": int((~frame["success"]).sum()),
            "total_wall_time_s": float(frame.get("wall_time_s", pd.Series(dtype=float)).sum()),
        }
        if "total" in frame:
            finals = frame.loc[frame["success"], "total"]
            if not finals.empty:
                report["best_total"] = float(finals.min())
                report["median_total"] = float(finals.median())
        self._send("run_report", report)
        return report
