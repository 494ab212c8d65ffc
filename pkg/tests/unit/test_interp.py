"""
Unit tests for observation ingestion, spline interpolation and normalization
"""
import numpy as np
import pytest

from core.exceptions import DataFormatError, InsufficientDataError, InvalidInputError, RangeError
from interp.normalizer import Normalizer, normalize
from interp.observations import ObservationSet, read_observations_csv, write_observations_csv
from interp.spline import SplineCurve, augment, collocation_days, fit_spline

DAYS = np.array([6.0, 9.0, 13.0, 16.0, 20.0, 23.0])
VOLUMES = np.array([10.0, 22.0, 35.0, 41.0, 60.0, 80.0])


def natural_spline_second_derivatives(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Second derivatives at the knots from the tridiagonal system with M_0 = M_n = 0"""
    n = x.size - 1
    h = np.diff(x)
    system = np.zeros((n - 1, n - 1))
    rhs = np.zeros(n - 1)
    for i in range(1, n):
        row = i - 1
        system[row, row] = 2.0 * (h[i - 1] + h[i])
        if row > 0:
            system[row, row - 1] = h[i - 1]
        if row < n - 2:
            system[row, row + 1] = h[i]
        rhs[row] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1])
    moments = np.zeros(n + 1)
    moments[1:n] = np.linalg.solve(system, rhs)
    return moments


def natural_spline_value(x: np.ndarray, y: np.ndarray, t: float) -> float:
    moments = natural_spline_second_derivatives(x, y)
    i = min(max(int(np.searchsorted(x, t)) - 1, 0), x.size - 2)
    h = x[i + 1] - x[i]
    a, b = x[i + 1] - t, t - x[i]
    return (moments[i] * a ** 3 + moments[i + 1] * b ** 3) / (6 * h) \
        + (y[i] / h - moments[i] * h / 6) * a + (y[i + 1] / h - moments[i + 1] * h / 6) * b


def test_spline_matches_tridiagonal_solve():
    spline = SplineCurve.fit(DAYS, VOLUMES)
    for t in np.linspace(6.0, 23.0, 37):
        assert spline(t) == pytest.approx(natural_spline_value(DAYS, VOLUMES, t), rel=1e-10)


def test_spline_interpolates_and_is_natural():
    spline = SplineCurve.fit(DAYS, VOLUMES)
    assert np.allclose(spline(DAYS), VOLUMES, rtol=1e-12)
    assert spline(6.0, derivative=2) == pytest.approx(0.0, abs=1e-10)
    assert spline(23.0, derivative=2) == pytest.approx(0.0, abs=1e-10)
    assert spline.coefficients.shape == (4, DAYS.size - 1)


def test_spline_through_a_line_is_the_line():
    spline = SplineCurve.fit(DAYS, 2.0 * DAYS + 1.0)
    assert spline(11.3) == pytest.approx(23.6)
    assert spline(11.3, derivative=1) == pytest.approx(2.0)


def test_spline_needs_three_distinct_points():
    with pytest.raises(InsufficientDataError):
        SplineCurve.fit(DAYS[:2], VOLUMES[:2])
    with pytest.raises(InvalidInputError):
        SplineCurve.fit(np.array([6.0, 9.0, 9.0]), np.array([1.0, 2.0, 3.0]))


def test_augment_grid():
    spline = fit_spline(ObservationSet(DAYS, VOLUMES))
    times, values = augment(spline, 100)
    assert times.size == 106
    assert np.all(np.diff(times) > 0)
    assert times[0] == 6.0 and times[-1] == 23.0
    for day, volume in zip(DAYS, VOLUMES):
        assert values[np.flatnonzero(times == day)[0]] == volume


def test_augment_drops_points_on_knots():
    spline = SplineCurve.fit(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0, 4.0]))
    times, _ = augment(spline, 3)
    # interior candidates 0.5, 1.0, 1.5; 1.0 is already a knot
    assert times.tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]


def test_collocation_days_match_augment_when_data_span_the_window():
    spline = fit_spline(ObservationSet(DAYS, VOLUMES))
    times, _ = augment(spline, 100)
    assert np.array_equal(collocation_days(spline, 100, 6.0, 23.0), times)


def test_collocation_days_cover_the_whole_window():
    inner = np.array([8.0, 13.0, 16.0, 20.0])
    spline = fit_spline(ObservationSet(inner, np.array([20.0, 35.0, 41.0, 60.0])))
    days = collocation_days(spline, 16, 6.0, 23.0)
    assert days[0] == 6.0 and days[-1] == 23.0
    assert np.all(np.diff(days) > 0)
    assert set(augment(spline, 16)[0]) <= set(days)
    # the 18-point uniform grid has unit spacing: days 6, 7 and 21 to 23 lie outside the data
    assert np.count_nonzero(days < 8.0) == 2
    assert np.count_nonzero(days > 20.0) == 3


def test_normalizer_round_trip():
    tau, volumes, normalizer = normalize(ObservationSet(DAYS, VOLUMES))
    assert tau[0] == 0.0 and tau[-1] == 1.0
    assert volumes.max() == 1.0
    assert np.allclose(normalizer.days(tau), DAYS)
    assert np.allclose(normalizer.physical_volume(volumes), VOLUMES)
    assert normalizer.duration == 17.0


def test_normalizer_state_scales():
    normalizer = Normalizer(6.0, 23.0, volume_scale=80.0, drug_scale=0.5)
    assert normalizer.state_scales().tolist() == [80.0, 80.0, 80.0, 0.5]


def test_degenerate_range_is_rejected():
    with pytest.raises(RangeError):
        Normalizer(6.0, 6.0, volume_scale=1.0)


def test_observation_invariants():
    with pytest.raises(InvalidInputError):
        ObservationSet(np.array([9.0, 6.0]), np.array([1.0, 2.0]))
    with pytest.raises(InvalidInputError):
        ObservationSet(np.array([6.0, 9.0]), np.array([1.0, 0.0]))


def test_observation_csv_round_trip(tmp_path):
    path = write_observations_csv(ObservationSet(DAYS, VOLUMES * 1.2345678912), str(tmp_path / "obs.csv"))
    restored = read_observations_csv(path)
    assert np.array_equal(restored.days, DAYS)
    assert np.allclose(restored.volumes, VOLUMES * 1.2345678912, rtol=1e-8)


@pytest.mark.parametrize("body, line", [
    ("day,volume\n6,1\n", 1),
    ("day,total_volume\n6,1\n9,abc\n", 3),
    ("day,total_volume\n6,1\n13,2\n9,3\n", 4),
    ("day,total_volume\n6,1\n9,-2\n", 3),
])
def test_malformed_observation_csv_names_line(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(DataFormatError) as info:
        read_observations_csv(str(path))
    assert info.value.line == line
    assert f":{line}:" in str(info.value)
