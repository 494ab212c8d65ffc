"""
Run configuration models for the fit and simulate commands
"""
import hashlib
import json
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from core.models.params import (
    PARAM_NAMES,
    DosingSchedule,
    InitialState,
    ParamSet,
    SmtProfile,
    default_schedule,
)

# Rounded published proportions do not always add up to exactly one
# (0.95665 + 0.00078 + 0.04256 = 0.99999), hence the tolerance.
PROPORTION_SUM_TOLERANCE = 1e-4


class ConstraintSpec(BaseModel):
    """Known C/T/M proportions of the total volume on one day"""
    day: float = Field(..., description="Anchor day")
    proportions: List[float] = Field(..., min_length=3, max_length=3, description="(q_C, q_T, q_M)")

    @field_validator("proportions")
    @classmethod
    def _check_proportions(cls, value: List[float]) -> List[float]:
        if any(q < 0 or q > 1 for q in value):
            raise ValueError("proportions must lie in [0, 1]")
        if abs(sum(value) - 1.0) > PROPORTION_SUM_TOLERANCE:
            raise ValueError(f"proportions sum to {sum(value):.6f}, expected 1")
        return value


def default_ic() -> ConstraintSpec:
    return ConstraintSpec(day=6.0, proportions=[0.99887, 0.0, 1 - 0.99887])


def default_histology() -> List[ConstraintSpec]:
    return [
        ConstraintSpec(day=17.0, proportions=[0.95755, 0.01818, 0.02427]),
        ConstraintSpec(day=23.0, proportions=[0.95665, 0.00078, 0.04256]),
    ]


class NetworkConfig(BaseModel):
    """Shape and initialization of one feedforward surrogate"""
    hidden_sizes: List[int] = Field(default_factory=lambda: [100, 100, 100])
    output_dim: int = Field(default=4)
    hidden_activation: Literal["silu"] = "silu"
    output_activation: Literal["softplus"] = "softplus"
    init_scheme: Literal["uniform_fan_in"] = "uniform_fan_in"


class ConstantSetting(BaseModel):
    """Whether a constant coefficient is learned, and its pinned value or initial guess"""
    trainable: bool = True
    value: float = Field(default=0.1, ge=0)


class LossConfig(BaseModel):
    residual_norm: Literal["squared", "euclidean"] = "squared"
    weighting: Literal["uncertainty", "fixed"] = "uncertainty"
    fixed_weights: Dict[str, float] = Field(
        default_factory=lambda: {"r": 1.0, "d": 1.0, "IC": 1.0, "bc": 1.0}
    )
    initial_log_variances: Dict[str, float] = Field(
        default_factory=lambda: {"r": 0.0, "d": 0.0, "IC": 0.0, "bc": 0.0}
    )
    bc_mean_over_anchors: bool = False


class TrainingConfig(BaseModel):
    epochs: int = Field(default=20000, ge=0)
    learning_rate: float = Field(default=1e-3, gt=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    log_interval: int = Field(default=100, gt=0)
    eval_points: int = Field(default=500, ge=2)
    divergence_threshold: float = Field(default=1e6, gt=0)
    divergence_patience: int = Field(default=100, gt=0)
    checkpoint_interval: Optional[int] = Field(default=None, gt=0)


class RunConfig(BaseModel):
    """Everything one `fit` needs"""
    data_path: str = Field(..., description="Observation CSV (day,total_volume)")
    t0: float = 6.0
    tF: float = 23.0
    ic: ConstraintSpec = Field(default_factory=default_ic)
    histology: List[ConstraintSpec] = Field(default_factory=default_histology)
    anchors_path: Optional[str] = Field(
        default=None, description="Anchors JSON from `simulate`; replaces ic/histology when set"
    )
    dosing: DosingSchedule = Field(default_factory=default_schedule)
    time_varying: List[str] = Field(default_factory=lambda: ["s_MT"])
    constants: Dict[str, ConstantSetting] = Field(default_factory=dict)
    pinned_profiles: Dict[str, SmtProfile] = Field(
        default_factory=dict, description="Time-varying parameters held to a known curve instead of learned"
    )
    state_network: NetworkConfig = Field(default_factory=NetworkConfig)
    parameter_network: NetworkConfig = Field(
        default_factory=lambda: NetworkConfig(hidden_sizes=[200, 200], output_dim=1)
    )
    m_interp: int = Field(default=100, ge=0)
    lambda_scale: float = Field(default=0.1, gt=0, description="s_MT units per unit of network output")
    drug_scale: Optional[float] = Field(default=None, gt=0, description="mg per normalized G unit")
    losses: LossConfig = Field(default_factory=LossConfig)
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    seeds: List[int] = Field(default_factory=lambda: list(range(10)), min_length=1)
    output_dir: str = "results/fit"

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        if self.tF <= self.t0:
            raise ValueError("tF must be greater than t0")
        if not self.t0 <= self.ic.day <= self.tF:
            raise ValueError(f"ic.day {self.ic.day} outside [{self.t0}, {self.tF}]")
        for i, spec in enumerate(self.histology):
            if not self.t0 <= spec.day <= self.tF:
                raise ValueError(f"histology[{i}].day {spec.day} outside [{self.t0}, {self.tF}]")
        outside = self.dosing.days_outside(self.t0, self.tF)
        if outside:
            raise ValueError(f"dosing.injections days {outside} outside [{self.t0}, {self.tF}]")
        for name in self.time_varying:
            if name not in PARAM_NAMES:
                raise ValueError(f"time_varying: unknown parameter {name!r}")
        if self.time_varying and len(self.time_varying) != self.parameter_network.output_dim:
            raise ValueError("parameter_network.output_dim must equal len(time_varying)")
        for name in self.constants:
            if name not in PARAM_NAMES:
                raise ValueError(f"constants.{name}: unknown parameter")
            if name in self.time_varying:
                raise ValueError(f"constants.{name}: parameter is time-varying")
        for name in self.pinned_profiles:
            if name not in PARAM_NAMES:
                raise ValueError(f"pinned_profiles.{name}: unknown parameter")
            if name in self.time_varying or name in self.constants:
                raise ValueError(f"pinned_profiles.{name}: parameter is already learned or constant")
        if self.state_network.output_dim != 4:
            raise ValueError("state_network.output_dim must be 4 (C, T, M, G)")
        return self

    def constant_names(self) -> List[str]:
        return [name for name in PARAM_NAMES
                if name not in self.time_varying and name not in self.pinned_profiles]


class SimulationConfig(BaseModel):
    """Ground truth for synthetic data generation"""
    t0: float = 6.0
    tF: float = 23.0
    step: float = Field(default=0.01, gt=0)
    params: ParamSet
    initial_state: InitialState
    s_mt_truth: SmtProfile
    dosing: DosingSchedule = Field(default_factory=default_schedule)
    sample_days: List[float] = Field(default_factory=lambda: [6.0, 9.0, 13.0, 16.0, 20.0, 23.0])
    anchor_days: List[float] = Field(default_factory=lambda: [6.0, 17.0, 23.0])
    noise_level: float = Field(default=0.0, ge=0)
    seed: int = 0
    output_dir: str = "results/simulate"

    @model_validator(mode="after")
    def _check_window(self) -> "SimulationConfig":
        if self.tF <= self.t0:
            raise ValueError("tF must be greater than t0")
        outside = self.dosing.days_outside(self.t0, self.tF)
        if outside:
            raise ValueError(f"dosing.injections days {outside} outside [{self.t0}, {self.tF}]")
        for name in ("sample_days", "anchor_days"):
            outside = [d for d in getattr(self, name) if not self.t0 <= d <= self.tF]
            if outside:
                raise ValueError(f"{name} {outside} outside [{self.t0}, {self.tF}]")
        return self


def config_hash(config: BaseModel) -> str:
    """SHA-256 of the canonical JSON form; independent of field order in the source file"""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
