"""
One physics-informed fitting problem: surrogates, learned scalars and the loss they minimize.

`PinnProblem` owns every trainable array. `bind()` registers them as leaves on a tape
once; `evaluate()` then records one full loss evaluation on top of those leaves and can
be repeated after each optimizer step.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from autodiff import ops
from autodiff.tape import Tape, Var
from core.exceptions import RangeError
from core.models.params import PARAM_NAMES
from core.models.run_config import ConstantSetting, RunConfig
from interp.normalizer import Normalizer
from interp.observations import ObservationSet
from interp.spline import SplineCurve, collocation_days, fit_spline
from losses.terms import ResidualContext, bc_loss, data_loss, ic_loss, residual_loss
from losses.weighting import LOSS_KEYS, LossBreakdown, total_loss
from neural.network import BoundNetwork, Network
from neural.scalars import TrainableScalar
from ode_model.profiles import make_profile
from ode_model.trajectory import Trajectory


@dataclass
class BoundProblem:
    """Leaves of one tape, in the same order as `PinnProblem.parameters()`"""
    state_net: BoundNetwork
    param_net: Optional[BoundNetwork]
    constants: Dict[str, Var]
    log_variances: Dict[str, Var]
    leaves: List[Var]


class PinnProblem:
    """Surrogates u_NN (time -> C, T, M, G) and Lambda_NN (time -> time-varying parameters)"""

    def __init__(self, obs: ObservationSet, config: RunConfig, seed: int):
        self.logger = logging.getLogger("trainer.problem")
        self.config = config
        self.seed = seed
        self.obs = obs

        outside = [d for d in obs.days if not config.t0 <= d <= config.tF]
        if outside:
            raise RangeError(f"observation days {outside} outside [{config.t0}, {config.tF}]")

        gem_total = config.dosing.total_dose("GEM")
        drug_scale = config.drug_scale or (gem_total if gem_total > 0 else 1.0)
        self.normalizer = Normalizer(config.t0, config.tF, float(np.max(obs.volumes)), drug_scale)

        self.spline: SplineCurve = fit_spline(obs)
        grid_days = collocation_days(self.spline, config.m_interp, config.t0, config.tF)
        self.tau_grid = self.normalizer.time(grid_days)
        self.tau_obs = self.normalizer.time(obs.days)
        self.u_obs = self.normalizer.volume(obs.volumes)

        self.tau_ic = np.array([self.normalizer.time(config.ic.day)])
        self.u_hat_ic = float(self.normalizer.volume(self.spline(config.ic.day)))
        self.histology = list(config.histology)
        self.tau_bc = self.normalizer.time(np.array([s.day for s in self.histology], dtype=float))
        self.u_hat_bc = np.asarray(self.normalizer.volume(
            np.array([self.spline(s.day) for s in self.histology], dtype=float)
        ))

        self.state_net = Network.init(config.state_network, seed)
        self.param_net = (
            Network.init(config.parameter_network, [seed, 1]) if config.time_varying else None
        )
        self.constants: Dict[str, TrainableScalar] = {}
        for name in config.constant_names():
            setting = config.constants.get(name, ConstantSetting())
            self.constants[name] = TrainableScalar(name, setting.value, setting.trainable)
        self.profiles = {name: make_profile(spec) for name, spec in config.pinned_profiles.items()}

        self.log_variances: Dict[str, np.ndarray] = {}
        if config.losses.weighting == "uncertainty":
            initial = config.losses.initial_log_variances
            self.log_variances = {k: np.array(float(initial.get(k, 0.0))) for k in LOSS_KEYS}

        self.residual_context = ResidualContext(
            normalizer=self.normalizer, schedule=config.dosing, norm=config.losses.residual_norm
        )
        self.logger.debug(
            f"seed {seed}: {self.tau_grid.size} collocation points, "
            f"{self.state_net.num_parameters()} state weights, drug_scale={drug_scale:.6g}"
        )

    def parameters(self) -> List[np.ndarray]:
        """Every array Adam updates, in a fixed order"""
        params = list(self.state_net.parameters())
        if self.param_net is not None:
            params.extend(self.param_net.parameters())
        params.extend(s.raw for s in self.constants.values() if s.trainable)
        params.extend(self.log_variances[k] for k in sorted(self.log_variances))
        return params

    def bind(self, tape: Tape) -> BoundProblem:
        state_net = self.state_net.bind(tape)
        param_net = self.param_net.bind(tape) if self.param_net is not None else None
        constants = {name: s.bind(tape) for name, s in self.constants.items()}
        log_variances = {k: tape.leaf(self.log_variances[k]) for k in sorted(self.log_variances)}
        leaves = list(state_net.leaves)
        if param_net is not None:
            leaves.extend(param_net.leaves)
        leaves.extend(constants[name] for name, s in self.constants.items() if s.trainable)
        leaves.extend(log_variances[k] for k in sorted(log_variances))
        return BoundProblem(state_net, param_net, constants, log_variances, leaves)

    def _coefficients(self, bound: BoundProblem, tau: np.ndarray) -> Dict[str, object]:
        coeffs: Dict[str, object] = {
            name: self.constants[name].transform(var) for name, var in bound.constants.items()
        }
        if bound.param_net is not None:
            lam = bound.param_net(tau)
            for i, name in enumerate(self.config.time_varying):
                coeffs[name] = ops.column(lam, i) * self.config.lambda_scale
        days = self.normalizer.days(tau)
        for name, profile in self.profiles.items():
            coeffs[name] = profile(days)
        return coeffs

    def evaluate(self, bound: BoundProblem, epoch: int = 0):
        """Record the weighted total loss; returns (total Var, LossBreakdown)"""
        u, du = bound.state_net.with_tangent(self.tau_grid)
        coeffs = self._coefficients(bound, self.tau_grid)
        terms = {
            "r": residual_loss(u, du, coeffs, self.tau_grid, self.residual_context),
            "d": data_loss(bound.state_net(self.tau_obs), self.u_obs),
            "IC": ic_loss(bound.state_net(self.tau_ic), self.config.ic, self.u_hat_ic),
            "bc": bc_loss(
                bound.state_net(self.tau_bc), self.histology, self.u_hat_bc,
                t_range=(self.config.t0, self.config.tF),
                mean_over_anchors=self.config.losses.bc_mean_over_anchors,
            ),
        }
        if self.config.losses.weighting == "uncertainty":
            return total_loss(terms, bound.log_variances, epoch=epoch)
        return total_loss(terms, fixed_weights=self.config.losses.fixed_weights, epoch=epoch)

    def learned_constants(self) -> Dict[str, float]:
        return {name: s.value for name, s in self.constants.items()}

    def parameter_curves(self, days: np.ndarray) -> Dict[str, np.ndarray]:
        """Every rate coefficient on `days` in physical units"""
        tau = self.normalizer.time(days)
        curves = {name: np.full(days.shape, s.value) for name, s in self.constants.items()}
        if self.param_net is not None:
            lam = self.param_net.forward(tau) * self.config.lambda_scale
            for i, name in enumerate(self.config.time_varying):
                curves[name] = lam[:, i]
        for name, profile in self.profiles.items():
            curves[name] = np.asarray(profile(days), dtype=float)
        return {name: curves[name] for name in PARAM_NAMES}

    def dense_trajectory(self, n_points: int) -> Trajectory:
        """Surrogate states and s_MT on `n_points` evenly spaced days over [t0, tF]"""
        days = np.linspace(self.config.t0, self.config.tF, n_points)
        states = self.state_net.forward(self.normalizer.time(days)) * self.normalizer.state_scales()
        return Trajectory(days, states, self.parameter_curves(days)["s_MT"])

    def header(self) -> Dict[str, object]:
        return {
            "seed": self.seed,
            "config": self.config.model_dump(mode="json"),
            "state_layers": self.state_net.layer_sizes,
            "parameter_layers": self.param_net.layer_sizes if self.param_net is not None else [],
        }
