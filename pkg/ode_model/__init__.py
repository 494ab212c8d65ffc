"""
Combination-therapy ODE model, dosing and the RK4 reference solver
"""
from ode_model.dosing import dosing_rate
from ode_model.observations import synthesize_observations
from ode_model.profiles import make_profile
from ode_model.solver import solve_rk4
from ode_model.system import rhs, vector_field
from ode_model.trajectory import SystemState, Trajectory

__all__ = [
    "SystemState", "Trajectory", "dosing_rate", "make_profile", "rhs",
    "solve_rk4", "synthesize_observations", "vector_field",
]
