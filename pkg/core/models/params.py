"""
ODE parameter, dosing and ground-truth profile models
"""
from typing import Annotated, List, Literal, Union

from pydantic import BaseModel, Field, model_validator

PARAM_NAMES = (
    "p_C", "k_TC", "k_GC", "n_T", "s_CT", "s_MT",
    "k_GT", "r_M", "k_GM", "d_M", "d_G",
)
STATE_NAMES = ("C", "T", "M", "G")


class ParamSet(BaseModel):
    """Rate constants of the combination-therapy model"""
    p_C: float = Field(..., ge=0, description="Cancer net growth [1/day]")
    k_TC: float = Field(..., ge=0, description="T cell killing of cancer [1/(mm^3 day)]")
    k_GC: float = Field(..., ge=0, description="GEM killing of cancer [1/(mg day)]")
    n_T: float = Field(..., ge=0, description="T cell net growth [1/day]")
    s_CT: float = Field(..., ge=0, description="Cancer suppression of T cells [1/(mm^3 day)]")
    s_MT: float = Field(..., ge=0, description="MDSC suppression of T cells [1/(mm^3 day)]")
    k_GT: float = Field(..., ge=0, description="GEM killing of T cells [1/(mg day)]")
    r_M: float = Field(..., ge=0, description="MDSC recruitment [1/day]")
    k_GM: float = Field(..., ge=0, description="GEM killing of MDSCs [1/(mg day)]")
    d_M: float = Field(..., ge=0, description="MDSC death [1/day]")
    d_G: float = Field(..., ge=0, description="GEM clearance [1/day]")


class InitialState(BaseModel):
    """State at the start of the simulated window"""
    C: float = Field(..., ge=0, description="Cancer volume [mm^3]")
    T: float = Field(..., ge=0, description="T cell volume [mm^3]")
    M: float = Field(..., ge=0, description="MDSC volume [mm^3]")
    G: float = Field(default=0.0, ge=0, description="GEM amount [mg]")


class Injection(BaseModel):
    """One injection event, delivered as a Gaussian pulse"""
    agent: Literal["GEM", "OT1"]
    day: float
    dose: float = Field(..., ge=0, description="mg for GEM, injected cells for OT1")
    pulse_width: float = Field(default=0.25, gt=0, description="Pulse standard deviation [day]")


class DosingSchedule(BaseModel):
    """Injection events plus the OT-1 cell-count to volume conversion"""
    injections: List[Injection] = Field(default_factory=list)
    ot1_volume_equivalent: float = Field(
        default=2e-6, gt=0, description="mm^3 of T cell volume per injected OT-1 cell"
    )

    def days_outside(self, t0: float, tF: float) -> List[float]:
        return [inj.day for inj in self.injections if not t0 <= inj.day <= tF]

    def total_dose(self, agent: str) -> float:
        return sum(inj.dose for inj in self.injections if inj.agent == agent)


def default_schedule() -> DosingSchedule:
    """GEM 0.5 mg on day 10, 5e6 OT-1 cells on day 14"""
    return DosingSchedule(injections=[
        Injection(agent="GEM", day=10.0, dose=0.5),
        Injection(agent="OT1", day=14.0, dose=5e6),
    ])


class ConstantProfile(BaseModel):
    kind: Literal["constant"] = "constant"
    value: float = Field(..., ge=0)


class SigmoidProfile(BaseModel):
    """low + (high - low) / (1 + exp(steepness * (t - midpoint)))"""
    kind: Literal["sigmoid"] = "sigmoid"
    high: float = Field(..., ge=0)
    low: float = Field(..., ge=0)
    midpoint: float
    steepness: float = Field(default=1.0, gt=0)


class PiecewiseLinearProfile(BaseModel):
    kind: Literal["piecewise_linear"] = "piecewise_linear"
    days: List[float] = Field(..., min_length=2)
    values: List[float] = Field(..., min_length=2)

    @model_validator(mode="after")
    def _check_table(self) -> "PiecewiseLinearProfile":
        if len(self.days) != len(self.values):
            raise ValueError("days and values must have the same length")
        if any(b <= a for a, b in zip(self.days, self.days[1:])):
            raise ValueError("days must be strictly increasing")
        if any(v < 0 for v in self.values):
            raise ValueError("values must be non-negative")
        return self


SmtProfile = Annotated[
    Union[ConstantProfile, SigmoidProfile, PiecewiseLinearProfile],
    Field(discriminator="kind"),
]
