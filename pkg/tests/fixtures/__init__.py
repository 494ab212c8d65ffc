"""
Test fixtures and data
"""
from typing import Any, Dict, List, Optional

FIXTURE_PARAMS = {
    "p_C": 0.3, "k_TC": 0.05, "k_GC": 0.02, "n_T": 0.1, "s_CT": 0.01, "s_MT": 0.04,
    "k_GT": 0.01, "r_M": 0.05, "k_GM": 0.6, "d_M": 0.2, "d_G": 0.5,
}

FIXTURE_INITIAL_STATE = {"C": 9.9887, "T": 0.0, "M": 0.0113, "G": 0.0}

FIXTURE_SMT_TRUTH = {"kind": "sigmoid", "high": 0.04, "low": 0.01, "midpoint": 14.0, "steepness": 1.0}

DEFAULT_DOSING = {
    "injections": [
        {"agent": "GEM", "day": 10.0, "dose": 0.5, "pulse_width": 0.25},
        {"agent": "OT1", "day": 14.0, "dose": 5e6, "pulse_width": 0.25},
    ],
    "ot1_volume_equivalent": 2e-6,
}


def simulation_config_dict(**overrides) -> Dict[str, Any]:
    data = {
        "t0": 6.0,
        "tF": 23.0,
        "step": 0.01,
        "params": dict(FIXTURE_PARAMS),
        "initial_state": dict(FIXTURE_INITIAL_STATE),
        "s_mt_truth": dict(FIXTURE_SMT_TRUTH),
        "dosing": DEFAULT_DOSING,
        "sample_days": [6.0, 9.0, 13.0, 16.0, 20.0, 23.0],
        "anchor_days": [6.0, 17.0, 23.0],
        "noise_level": 0.0,
        "seed": 0,
    }
    data.update(overrides)
    return data


def fixture_simulation_config(**overrides):
    from core.models.run_config import SimulationConfig
    return SimulationConfig(**simulation_config_dict(**overrides))


def run_config_dict(data_path: str, anchors_path: Optional[str] = None,
                    seeds: Optional[List[int]] = None, epochs: int = 20, **overrides) -> Dict[str, Any]:
    """Tiny networks and few epochs; enough to exercise every code path quickly"""
    data = {
        "data_path": data_path,
        "t0": 6.0,
        "tF": 23.0,
        "dosing": DEFAULT_DOSING,
        "state_network": {"hidden_sizes": [8, 8], "output_dim": 4},
        "parameter_network": {"hidden_sizes": [8], "output_dim": 1},
        "m_interp": 10,
        "training": {"epochs": epochs, "log_interval": 5, "eval_points": 40},
        "seeds": seeds if seeds is not None else [0, 1, 2],
    }
    if anchors_path is not None:
        data["anchors_path"] = anchors_path
    data.update(overrides)
    return data


def small_run_config(data_path: str, **kwargs):
    from core.models.run_config import RunConfig
    return RunConfig(**run_config_dict(data_path, **kwargs))
