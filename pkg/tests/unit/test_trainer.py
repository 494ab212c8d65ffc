"""
Unit tests for the optimizer and the band statistics
"""
import numpy as np
import pytest

from core.models.run_config import TrainingConfig
from ode_model.trajectory import Trajectory
from trainer.adam import AdamState, adam_step
from trainer.ensemble import compute_bands
from trainer.train import TrainingRun


def test_first_adam_step_moves_by_learning_rate():
    params = [np.zeros(3), np.array(1.0)]
    state = AdamState.zeros(params, TrainingConfig())
    assert adam_step(params, [np.ones(3), np.array(1.0)], state)
    expected = 1e-3 / (1.0 + 1e-8)
    assert np.allclose(params[0], -expected, rtol=1e-12)
    assert float(params[1]) == pytest.approx(1.0 - expected, rel=1e-12)
    assert state.step == 1


def test_zero_gradient_leaves_parameters_unchanged():
    params = [np.arange(4.0)]
    state = AdamState.zeros(params, TrainingConfig())
    for _ in range(3):
        adam_step(params, [np.zeros(4)], state)
    assert np.array_equal(params[0], np.arange(4.0))


def test_non_finite_gradient_rejects_step():
    params = [np.ones(2)]
    state = AdamState.zeros(params, TrainingConfig())
    assert adam_step(params, [np.array([1.0, np.nan])], state) is False
    assert state.step == 0
    assert np.array_equal(params[0], np.ones(2))
    assert np.array_equal(state.m[0], np.zeros(2))


def test_adam_minimizes_a_quadratic():
    x = np.array([3.0, -2.0])
    state = AdamState.zeros([x], TrainingConfig(learning_rate=0.05))
    for _ in range(2000):
        adam_step([x], [2.0 * x], state)
    assert np.all(np.abs(x) < 0.1)


def fake_run(seed: int, scale: float) -> TrainingRun:
    times = np.linspace(6.0, 23.0, 4)
    states = np.outer(np.ones(4), [1.0, 2.0, 3.0, 4.0]) * scale
    trajectory = Trajectory(times, states, np.full(4, 0.01 * scale))
    return TrainingRun(seed=seed, loss_history=[], total_trace=np.zeros(0), trajectory=trajectory,
                       parameter_curves={}, learned_constants={})


def test_bands_are_mean_plus_minus_std():
    bands = compute_bands([fake_run(0, 1.0), fake_run(1, 3.0)])
    assert np.allclose(bands["C"].mean, 2.0)
    assert np.allclose(bands["C"].lower, 1.0)
    assert np.allclose(bands["C"].upper, 3.0)
    assert np.allclose(bands["total"].mean, 12.0)
    assert np.allclose(bands["s_MT"].std, 0.01)


def test_singleton_band_has_zero_width():
    bands = compute_bands([fake_run(0, 2.0)])
    for band in bands.values():
        assert np.array_equal(band.lower, band.upper)
