"""
`simulate`: ground-truth trajectory and sampled observations from known parameters
"""
from typing import Any, Dict, Optional

from cli.commands.base_command import BaseCommand
from cli.persistence import write_simulation
from core.models.params import InitialState
from core.models.run_config import SimulationConfig, config_hash
from ode_model.observations import synthesize_observations
from ode_model.profiles import make_profile
from ode_model.solver import solve_rk4
from ode_model.trajectory import SystemState


class SimulateCommand(BaseCommand):
    def __init__(self, observer=None):
        super().__init__("simulate", "Generate synthetic data with the RK4 reference solver", observer)

    def run(self, config_path: str, out_dir: Optional[str] = None, **kwargs) -> Dict[str, Any]:
        config = self.load_config(config_path, SimulationConfig)
        initial: InitialState = config.initial_state
        trajectory = solve_rk4(
            SystemState(initial.C, initial.T, initial.M, initial.G),
            config.params,
            make_profile(config.s_mt_truth),
            config.dosing,
            config.t0,
            config.tF,
            config.step,
        )
        obs = synthesize_observations(
            trajectory, config.sample_days, config.noise_level, config.seed, config.anchor_days
        )
        target = out_dir or config.output_dir
        paths = write_simulation(trajectory, obs, config.dosing, target)
        self.log_event("simulate_complete", {"out_dir": target, "points": int(trajectory.times.size)})
        return {"paths": paths, "config_hash": config_hash(config), "out_dir": target}
