"""
Natural cubic spline through the observed totals, and collocation-grid augmentation
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from core.exceptions import InsufficientDataError, InvalidInputError
from interp.observations import ObservationSet


@dataclass(frozen=True)
class SplineCurve:
    """Piecewise cubic interpolant with zero second derivative at both end knots"""
    knots: np.ndarray
    values: np.ndarray
    _spline: CubicSpline

    @classmethod
    def fit(cls, knots: np.ndarray, values: np.ndarray) -> "SplineCurve":
        knots = np.asarray(knots, dtype=float)
        values = np.asarray(values, dtype=float)
        if knots.size < 3:
            raise InsufficientDataError(f"need at least 3 points for a spline, got {knots.size}")
        if np.unique(knots).size != knots.size:
            raise InvalidInputError("duplicate knot times")
        order = np.argsort(knots)
        knots, values = knots[order], values[order]
        return cls(knots, values, CubicSpline(knots, values, bc_type="natural"))

    @property
    def coefficients(self) -> np.ndarray:
        """(4, n_intervals) local power-basis coefficients, highest degree first"""
        return self._spline.c

    def __call__(self, t: Union[float, np.ndarray], derivative: int = 0) -> Union[float, np.ndarray]:
        result = self._spline(t, nu=derivative)
        return float(result) if np.ndim(result) == 0 else result


def fit_spline(obs: ObservationSet) -> SplineCurve:
    return SplineCurve.fit(obs.days, obs.volumes)


def augment(spline: SplineCurve, m_interp: int) -> Tuple[np.ndarray, np.ndarray]:
    """Knots plus `m_interp` evenly spaced interior points, sorted and deduplicated.

    An interior point that coincides with a knot is dropped, so knot values are kept exactly.
    """
    if m_interp < 0:
        raise InvalidInputError(f"m_interp must be >= 0, got {m_interp}")
    start, stop = spline.knots[0], spline.knots[-1]
    interior = np.linspace(start, stop, m_interp + 2)[1:-1]
    tol = 1e-9 * (stop - start)
    keep = np.array([np.min(np.abs(spline.knots - t)) > tol for t in interior], dtype=bool)
    interior = interior[keep] if interior.size else interior
    times = np.concatenate([spline.knots, interior])
    values = np.concatenate([spline.values, spline(interior) if interior.size else np.zeros(0)])
    order = np.argsort(times, kind="stable")
    return times[order], values[order]


def collocation_days(spline: SplineCurve, m_interp: int, t0: float, tF: float) -> np.ndarray:
    """Augmented days plus evenly spaced points wherever [t0, tF] reaches past the first or last knot"""
    days, _ = augment(spline, m_interp)
    uniform = np.linspace(t0, tF, m_interp + 2)
    tol = 1e-9 * (tF - t0)
    beyond = uniform[(uniform < days[0] - tol) | (uniform > days[-1] + tol)]
    return np.unique(np.concatenate([days, beyond]))
