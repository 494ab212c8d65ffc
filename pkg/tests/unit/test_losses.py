"""
Unit tests for the loss terms and their weighting
"""
import numpy as np
import pytest

from autodiff.tape import Tape
from core.exceptions import NumericError, RangeError
from core.models.params import PARAM_NAMES, DosingSchedule, default_schedule
from core.models.run_config import ConstraintSpec, default_histology, default_ic
from interp.normalizer import Normalizer
from interp.spline import SplineCurve
from losses.terms import ResidualContext, bc_loss, data_loss, ic_loss, residual_loss
from losses.weighting import LOSS_KEYS, total_loss
from ode_model.profiles import make_profile
from tests.fixtures import fixture_simulation_config


def test_ic_loss_with_published_proportions():
    tape = Tape()
    prediction = tape.leaf(np.array([[1.0, 0.0, 0.0, 0.0]]))
    loss = ic_loss(prediction, default_ic(), 1.0)
    assert float(loss.value) == pytest.approx(2 * 0.00113 ** 2, rel=1e-9)
    assert float(loss.value) == pytest.approx(2.554e-6, rel=1e-3)


def test_bc_loss_day_23_with_zero_prediction():
    tape = Tape()
    day_23 = default_histology()[1]
    loss = bc_loss(tape.leaf(np.zeros((1, 4))), [day_23], np.array([1.0]))
    assert float(loss.value) == pytest.approx(0.95665 ** 2 + 0.00078 ** 2 + 0.04256 ** 2, rel=1e-12)
    assert float(loss.value) == pytest.approx(0.91699, abs=1e-5)


def test_bc_loss_sums_or_averages_over_anchors():
    tape = Tape()
    anchors = default_histology()
    u = tape.leaf(np.zeros((2, 4)))
    summed = float(bc_loss(u, anchors, np.ones(2)).value)
    averaged = float(bc_loss(u, anchors, np.ones(2), mean_over_anchors=True).value)
    assert averaged == pytest.approx(summed / 2)


def test_bc_loss_without_anchors_is_zero():
    tape = Tape()
    assert float(bc_loss(tape.leaf(np.zeros((0, 4))), [], np.zeros(0)).value) == 0.0


def test_bc_loss_rejects_anchor_outside_window():
    tape = Tape()
    late = ConstraintSpec(day=30.0, proportions=[1.0, 0.0, 0.0])
    with pytest.raises(RangeError):
        bc_loss(tape.leaf(np.zeros((1, 4))), [late], np.ones(1), t_range=(6.0, 23.0))


def test_data_loss_is_mean_squared_total_error():
    tape = Tape()
    u = tape.leaf(np.array([[0.5, 0.1, 0.1, 9.0], [0.2, 0.2, 0.2, 9.0]]))
    loss = data_loss(u, np.array([0.7, 0.9]))
    assert float(loss.value) == pytest.approx(((0.7 - 0.7) ** 2 + (0.6 - 0.9) ** 2) / 2)
    (grad,) = tape.backward(loss, [u])
    # the drug column does not enter the data misfit
    assert np.all(grad[:, 3] == 0)


def residual_of(trajectory, stride: int, norm: str = "squared") -> float:
    """Residual loss with the surrogate replaced by the reference solution itself"""
    config = fixture_simulation_config()
    normalizer = Normalizer(config.t0, config.tF, float(trajectory.total_volume.max()),
                            drug_scale=config.dosing.total_dose("GEM"))
    scales = normalizer.state_scales()
    idx = np.arange(stride, trajectory.times.size - stride, stride)
    days = trajectory.times[idx]

    slopes = np.stack([
        SplineCurve.fit(trajectory.times, trajectory.states[:, k])(days, derivative=1)
        for k in range(4)
    ], axis=1)
    tape = Tape()
    u = tape.constant(trajectory.states[idx] / scales)
    du = tape.constant(slopes * normalizer.duration / scales)
    coeffs = config.params.model_dump()
    coeffs["s_MT"] = make_profile(config.s_mt_truth)(days)
    context = ResidualContext(normalizer=normalizer, schedule=config.dosing, norm=norm)
    return float(residual_loss(u, du, coeffs, normalizer.time(days), context).value)


def test_reference_solution_has_small_residual(oracle_trajectory):
    assert residual_of(oracle_trajectory, stride=10) <= 1e-3
    assert residual_of(oracle_trajectory, stride=10, norm="euclidean") <= 1e-3


def test_residual_gradient_matches_finite_difference(rng):
    normalizer = Normalizer(6.0, 23.0, volume_scale=50.0, drug_scale=0.5)
    context = ResidualContext(normalizer=normalizer, schedule=default_schedule())
    tau = np.linspace(0.0, 1.0, 7)
    u_value = rng.uniform(0.1, 1.0, size=(7, 4))
    du_value = rng.normal(size=(7, 4))
    k_value = np.array(0.3)

    def evaluate(tape):
        u, du, k = tape.leaf(u_value), tape.leaf(du_value), tape.leaf(k_value)
        coeffs = {name: 0.05 for name in PARAM_NAMES}
        coeffs["p_C"] = k
        coeffs["s_MT"] = np.full(tau.shape, 0.02)
        return (u, du, k), residual_loss(u, du, coeffs, tau, context)

    tape = Tape()
    leaves, loss = evaluate(tape)
    grads = tape.backward(loss, list(leaves))

    h = 1e-6
    for array, grad, index in ((u_value, grads[0], (3, 1)), (du_value, grads[1], (5, 2)),
                               (k_value, grads[2], ())):
        saved = array[index]
        array[index] = saved + h
        up = float(evaluate(Tape())[1].value)
        array[index] = saved - h
        down = float(evaluate(Tape())[1].value)
        array[index] = saved
        assert grad[index] == pytest.approx((up - down) / (2 * h), rel=1e-5, abs=1e-8)


def test_non_finite_residual_names_grid_point():
    normalizer = Normalizer(6.0, 23.0, volume_scale=1.0)
    context = ResidualContext(normalizer=normalizer, schedule=default_schedule())
    tape = Tape()
    u_value = np.ones((3, 4))
    u_value[1, 0] = np.inf
    coeffs = {name: 0.1 for name in PARAM_NAMES}
    with np.errstate(invalid="ignore"):
        with pytest.raises(NumericError) as info:
            residual_loss(tape.leaf(u_value), tape.leaf(np.zeros((3, 4))), coeffs,
                          np.array([0.0, 0.5, 1.0]), context)
    assert info.value.location == pytest.approx(14.5)


def test_log_variance_stationary_point():
    tape = Tape()
    values = {"r": 0.3, "d": 2.0, "IC": 1e-4, "bc": 0.05}
    terms = {k: tape.constant(np.array(v)) for k, v in values.items()}
    log_vars = {k: tape.leaf(np.array(np.log(v))) for k, v in values.items()}
    total, breakdown = total_loss(terms, log_vars)
    grads = tape.backward(total, [log_vars[k] for k in LOSS_KEYS])
    assert np.allclose(grads, 0.0, atol=1e-12)
    assert breakdown.w_d == pytest.approx(0.5)


def test_log_variance_gradient():
    tape = Tape()
    terms = {k: tape.constant(np.array(2.0)) for k in LOSS_KEYS}
    log_vars = {k: tape.leaf(np.array(0.0)) for k in LOSS_KEYS}
    total, breakdown = total_loss(terms, log_vars)
    grads = tape.backward(total, [log_vars[k] for k in LOSS_KEYS])
    # -exp(-s) * L + 1 at s = 0
    assert np.allclose(grads, -1.0)
    assert breakdown.total == pytest.approx(8.0)


def test_fixed_weights():
    tape = Tape()
    terms = {k: tape.constant(np.array(1.0 + i)) for i, k in enumerate(LOSS_KEYS)}
    total, breakdown = total_loss(terms, fixed_weights={"r": 2.0, "d": 1.0, "IC": 0.5, "bc": 0.0})
    assert breakdown.total == pytest.approx(2.0 * 1 + 1.0 * 2 + 0.5 * 3 + 0.0 * 4)
    assert breakdown.w_bc == 0.0
    assert breakdown.term("IC") == 3.0


def test_constant_state_solves_zero_vector_field():
    normalizer = Normalizer(6.0, 23.0, volume_scale=40.0, drug_scale=0.5)
    context = ResidualContext(normalizer=normalizer, schedule=DosingSchedule())
    tau = np.linspace(0.0, 1.0, 9)
    coeffs = {name: 0.0 for name in PARAM_NAMES}
    tape = Tape()
    u = tape.leaf(np.tile([0.7, 0.1, 0.2, 0.05], (9, 1)))
    flat = tape.constant(np.zeros((9, 4)))
    assert float(residual_loss(u, flat, coeffs, tau, context).value) == 0.0

    # a drift of delta on one component is penalized
    drift = np.zeros((9, 4))
    drift[:, 1] = 0.3
    assert float(residual_loss(u, tape.constant(drift), coeffs, tau, context).value) == pytest.approx(0.09)


@pytest.mark.parametrize("factor", [0.25, 3.7, 40.0])
def test_data_loss_is_homogeneous_of_degree_two(factor, rng):
    u_value = rng.uniform(0.1, 2.0, size=(6, 4))
    observed = rng.uniform(0.5, 5.0, size=6)
    base = float(data_loss(Tape().leaf(u_value), observed).value)
    scaled = float(data_loss(Tape().leaf(factor * u_value), factor * observed).value)
    assert scaled == pytest.approx(factor ** 2 * base, rel=1e-12)


def residual_on_grid(trajectory, stride: int) -> float:
    """Residual of the reference solution when only every `stride`-th point is kept"""
    config = fixture_simulation_config()
    normalizer = Normalizer(config.t0, config.tF, float(trajectory.total_volume.max()),
                            drug_scale=config.dosing.total_dose("GEM"))
    scales = normalizer.state_scales()
    days = trajectory.times[::stride]
    states = trajectory.states[::stride]
    assert days[-1] == trajectory.times[-1]

    slopes = np.stack([SplineCurve.fit(days, states[:, k])(days, derivative=1) for k in range(4)], axis=1)
    tape = Tape()
    coeffs = config.params.model_dump()
    coeffs["s_MT"] = make_profile(config.s_mt_truth)(days)
    context = ResidualContext(normalizer=normalizer, schedule=config.dosing)
    return float(residual_loss(
        tape.constant(states / scales), tape.constant(slopes * normalizer.duration / scales),
        coeffs, normalizer.time(days), context,
    ).value)


def test_reference_residual_shrinks_as_grid_is_refined(oracle_trajectory):
    coarse, medium, fine = (residual_on_grid(oracle_trajectory, stride) for stride in (50, 20, 10))
    assert coarse > medium > fine
