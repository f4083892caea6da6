"""Handover geometry and rates.

The excess-area closed form is checked against a literal two-circle lens
construction: the region that must be empty of stations for the walk
endpoint to keep its serving station is D(end, w) minus its overlap with
the original association disk D(start, r), with the centers l apart.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hoskip.handover import (ChordGeometry, chord_distance, excess_area,
                             expected_handovers_nonskip,
                             handover_probability_skip)
from hoskip.params import ParameterError
from hoskip.quadrature import ConvergenceError, QuadratureSpec


def lens_area(big_r: float, small_r: float, d: float) -> float:
    """Intersection area of circles with radii big_r, small_r, centers d apart."""
    if d >= big_r + small_r:
        return 0.0
    if d <= abs(big_r - small_r):
        return math.pi * min(big_r, small_r) ** 2
    a = (d * d + big_r * big_r - small_r * small_r) / (2.0 * d * big_r)
    b = (d * d + small_r * small_r - big_r * big_r) / (2.0 * d * small_r)
    tri = ((-d + small_r + big_r) * (d + small_r - big_r)
           * (d - small_r + big_r) * (d + small_r + big_r))
    return (big_r * big_r * math.acos(max(-1.0, min(1.0, a)))
            + small_r * small_r * math.acos(max(-1.0, min(1.0, b)))
            - 0.5 * math.sqrt(max(tri, 0.0)))


def oracle_excess(l: float, r: float, theta: float) -> float:
    w = math.sqrt(max(l * l + r * r - 2.0 * l * r * math.cos(theta), 0.0))
    if w == 0.0:
        return 0.0
    # Near-tangent configurations cancel badly in the lens formula too;
    # the true area always lies in [0, pi*w^2].
    return min(max(math.pi * w * w - lens_area(w, r, l), 0.0),
               math.pi * w * w)


def test_excess_area_frozen_point():
    # l = r = 1, theta = pi/2: w = sqrt(2) and the area works out to pi + 1.
    got = excess_area(ChordGeometry(1.0, 1.0, math.pi / 2.0))
    assert got == pytest.approx(math.pi + 1.0, rel=1e-12)
    assert oracle_excess(1.0, 1.0, math.pi / 2.0) == pytest.approx(
        math.pi + 1.0, rel=1e-12)


@pytest.mark.parametrize("l,r,theta", [
    (0.5, 0.5, 1.0),
    (2.0, 0.3, 0.2),
    (0.1, 1.5, 3.0),
    (1.0, 1.0, math.pi),   # antipodal: w = l + r, disk fully engulfed
    (0.7, 0.7, 1e-9),      # and nearly degenerate chords
])
def test_excess_area_matches_lens_oracle(l, r, theta):
    got = excess_area(ChordGeometry(l, r, theta))
    want = oracle_excess(l, r, theta)
    assert got == pytest.approx(want, rel=1e-9, abs=1e-12)


@given(l=st.floats(0.01, 5.0), r=st.floats(0.01, 5.0),
       theta=st.floats(1e-3, math.pi - 1e-3))
@settings(max_examples=300, deadline=None)
def test_excess_area_random_geometry(l, r, theta):
    got = excess_area(ChordGeometry(l, r, theta))
    want = oracle_excess(l, r, theta)
    w = chord_distance(ChordGeometry(l, r, theta))
    assert got == pytest.approx(want, rel=1e-8, abs=1e-10)
    assert 0.0 <= got <= math.pi * w * w + 1e-12


@given(l=st.floats(0.0, 5.0), r=st.floats(0.01, 5.0),
       theta=st.floats(0.0, math.pi))
@settings(max_examples=200, deadline=None)
def test_chord_distance_triangle_bounds(l, r, theta):
    w = chord_distance(ChordGeometry(l, r, theta))
    assert abs(l - r) - 1e-12 <= w <= l + r + 1e-12


def test_chord_geometry_validation():
    with pytest.raises(ParameterError):
        ChordGeometry(-0.1, 1.0, 1.0)
    with pytest.raises(ParameterError):
        ChordGeometry(1.0, 0.0, 1.0)
    with pytest.raises(ParameterError):
        ChordGeometry(1.0, 1.0, 3.2)


def test_expected_handovers_examples():
    assert expected_handovers_nonskip(1.0, 1.0) == pytest.approx(
        4.0 / math.pi, rel=1e-12)
    # 4 * sqrt(3) * 0.3 / pi
    assert expected_handovers_nonskip(0.3, 3.0) == pytest.approx(
        0.6615946745061504, rel=1e-12)
    assert expected_handovers_nonskip(0.0, 5.0) == 0.0


def test_expected_handovers_linear_in_length():
    base = expected_handovers_nonskip(0.2, 2.0)
    assert expected_handovers_nonskip(0.6, 2.0) == pytest.approx(
        3.0 * base, rel=1e-12)


def test_handover_probability_zero_length():
    assert handover_probability_skip(0.0, 3.0) == 0.0


def test_handover_probability_saturates():
    assert handover_probability_skip(5.0, 3.0) >= 0.999


def test_handover_probability_regression_anchor():
    # Frozen from this implementation; guarded independently by the
    # Monte Carlo stage of the validation suite.
    assert handover_probability_skip(0.5, 3.0) == pytest.approx(
        0.82056428774, rel=1e-8)


def test_handover_probability_bounds_and_monotone_l():
    lam = 3.0
    vals = [handover_probability_skip(l, lam)
            for l in (0.05, 0.1, 0.2, 0.4, 0.8, 1.2)]
    assert all(0.0 <= v <= 1.0 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_handover_probability_monotone_density():
    for l in (0.1, 0.3, 0.7):
        v = [handover_probability_skip(l, lam) for lam in (1.0, 3.0, 5.0)]
        assert v[0] < v[1] < v[2]


def test_handover_probability_scale_invariance():
    # Only l * sqrt(lam) matters: N2(l, lam) = N2(l*sqrt(lam), 1).
    for l in (0.1, 0.5, 1.0):
        for lam in (1.0, 3.0, 5.0):
            a = handover_probability_skip(l, lam)
            b = handover_probability_skip(l * math.sqrt(lam), 1.0)
            assert a == pytest.approx(b, rel=1e-6, abs=1e-9)


def test_handover_probability_below_crossing_count():
    # Skipping can only reduce handovers: P(handover at end) is at most the
    # expected number of boundary crossings of the full walk.
    for l in (0.05, 0.2, 0.5, 1.0):
        for lam in (1.0, 5.0):
            n2 = handover_probability_skip(l, lam)
            n1 = expected_handovers_nonskip(l, lam)
            assert n2 <= min(1.0, n1) + 1e-9


def test_handover_probability_nonconvergence_raises():
    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=0.0, max_subdivisions=2)
    with pytest.raises(ConvergenceError):
        handover_probability_skip(0.5, 3.0, spec)
