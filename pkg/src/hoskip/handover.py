"""Handover counts along a straight displacement in a Poisson network.

A user associated with the nearest base station of a homogeneous PPP of
density ``lam`` moves a distance ``l``.  Without skipping, the expected
number of cell-boundary crossings is ``4*sqrt(lam)*l/pi``.  With skipping,
at most one handover is executed per period -- exactly when the endpoint
falls outside the starting cell -- and that probability is a double
integral over the serving distance and bearing of the void probability of
the union of the two association disks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import ParameterError
from .quadrature import (ConvergenceError, QuadratureSpec, QuadResult,
                         integrate_nested)

__all__ = [
    "ChordGeometry",
    "chord_distance",
    "excess_area",
    "expected_handovers_nonskip",
    "handover_probability_skip",
]


@dataclass(frozen=True)
class ChordGeometry:
    """Start-anchored triangle: displacement l, station at range r, bearing theta.

    ``l`` is the distance moved, ``r`` the distance from the starting point
    to a station, and ``theta`` in [0, pi] the angle between the two (by
    symmetry only the upper half-plane matters).
    """

    l: float
    r: float
    theta: float

    def __post_init__(self):
        if not self.l >= 0:
            raise ParameterError(f"l must be >= 0, got {self.l}")
        if not self.r > 0:
            raise ParameterError(f"r must be > 0, got {self.r}")
        if not 0 <= self.theta <= math.pi:
            raise ParameterError(f"theta must be in [0, pi], got {self.theta}")


def chord_distance(geom: ChordGeometry) -> float:
    """Distance from the displaced endpoint to the station (law of cosines)."""
    l, r, th = geom.l, geom.r, geom.theta
    w2 = l * l + r * r - 2.0 * l * r * math.cos(th)
    w = math.sqrt(max(w2, 0.0))
    # Guard the triangle inequality against rounding.
    return min(max(w, abs(l - r)), l + r)


def _excess_area(l, r, theta):
    """Vectorized area of D(end, w) \\ D(start, r); see excess_area."""
    w2 = l * l + r * r - 2.0 * l * r * np.cos(theta)
    w = np.sqrt(np.maximum(w2, 0.0))
    with np.errstate(invalid="ignore", divide="ignore"):
        arg = np.clip((l - r * np.cos(theta)) / w, -1.0, 1.0)
        area = (w2 * (0.5 * np.pi + np.arcsin(arg))
                - r * r * theta + l * r * np.sin(theta))
    # w == 0 only when the endpoint sits on the station (l == r, theta == 0);
    # the endpoint disk degenerates to a point.  Near-tangent circles lose
    # digits to cancellation, so pin the result to its mathematical range.
    area = np.clip(area, 0.0, np.pi * w2)
    return np.where(w > 0.0, area, 0.0)


def excess_area(geom: ChordGeometry) -> float:
    """Area of the endpoint association disk outside the starting one.

    With w the chord distance, this is |D(end, w) \\ D(start, r)|: the
    region whose emptiness, on top of D(start, r), makes the starting
    station still the nearest one at the endpoint.  Computed in closed form
    from the circle-circle lens; the arcsine argument is clipped to [-1, 1]
    to absorb rounding at the tangency configurations.
    """
    return float(_excess_area(geom.l, geom.r, geom.theta))


def expected_handovers_nonskip(l: float, lam: float) -> float:
    """Expected boundary crossings over a displacement l, no skipping."""
    if not l >= 0:
        raise ValueError(f"l must be >= 0, got {l}")
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    return 4.0 * math.sqrt(lam) * l / math.pi


@lru_cache(maxsize=4096)
def _handover_probability_skip(l: float, lam: float,
                               spec: QuadratureSpec) -> QuadResult:
    r_max = 6.0 / math.sqrt(lam * math.pi)

    def integrand(theta, r):
        b = _excess_area(l, r, theta)
        return -2.0 * lam * r * np.exp(-lam * math.pi * r * r) \
            * np.expm1(-lam * b)

    return integrate_nested(integrand, [(0.0, math.pi), (0.0, r_max)],
                            spec, vectorized=True)


def handover_probability_skip(l: float, lam: float,
                              spec: QuadratureSpec | None = None) -> float:
    """Probability the endpoint of a skipping period lies in a new cell.

    Equals the expected number of handovers *executed* per period when all
    intermediate crossings are skipped.  The complement -- endpoint still
    served by the starting station -- is the void probability of the union
    of the two association disks, averaged over the serving distance
    (Rayleigh) and bearing (uniform); the union area is pi*r^2 plus the
    excess area of the endpoint disk.

    Raises
    ------
    ConvergenceError
        If the double integral fails to reach the requested tolerance.
    """
    if not l >= 0:
        raise ValueError(f"l must be >= 0, got {l}")
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if spec is None:
        spec = QuadratureSpec()
    if l == 0.0:
        return 0.0
    res = _handover_probability_skip(float(l), float(lam), spec)
    if not res.converged:
        raise ConvergenceError("handover probability integral", res)
    return min(max(res.value, 0.0), 1.0)
