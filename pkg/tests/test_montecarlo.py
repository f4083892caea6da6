"""Monte Carlo estimators: reproducibility, window sufficiency, and
agreement with the analytic anchors they exist to verify."""

import math

import numpy as np
import pytest

from hoskip.datarate import RateQuery, tau1, tau2_exact, REDUCED_ACCURACY
from hoskip.handover import (expected_handovers_nonskip,
                             handover_probability_skip)
from hoskip.montecarlo import (Estimate, McConfig, estimate_n1, estimate_n2,
                               estimate_q2, sample_ppp, sample_xi2, _rep_rng)
from hoskip.params import (NetworkParams, ParameterError, SkippingPolicy,
                           SpeedLaw)

NET33 = NetworkParams(3.0, 3.0, 0.0)
MC = McConfig(replications=2000, seed=11)


def test_mcconfig_validation():
    with pytest.raises(ParameterError):
        McConfig(replications=0)
    with pytest.raises(ParameterError):
        McConfig(window_radius_factor=2.0)
    with pytest.raises(ParameterError):
        McConfig(segment_step=0.0)


def test_estimate_structure():
    est = Estimate(1.0, 0.1, 1.0 - 0.2576, 1.0 + 0.2576, 100)
    assert est.ci99_high - est.ci99_low == pytest.approx(2 * 2.576 * 0.1)


def test_ppp_count_distribution():
    lam, radius = 3.0, 4.0
    counts = [sample_ppp(lam, radius, _rep_rng(5, i)).points.shape[0]
              for i in range(2000)]
    mean = np.mean(counts)
    want = lam * math.pi * radius * radius
    se = np.std(counts, ddof=1) / math.sqrt(len(counts))
    assert abs(mean - want) <= 3.5 * se


def test_ppp_points_inside_window():
    dep = sample_ppp(5.0, 2.0, _rep_rng(0, 0))
    pts = dep.points
    assert pts.ndim == 2 and pts.shape[1] == 2
    assert dep.window_radius == 2.0
    assert np.all(np.hypot(pts[:, 0], pts[:, 1]) <= 2.0 + 1e-12)


def test_ppp_void_probability():
    # P(no point within unit distance of the center) = exp(-pi * lam).
    lam = 1.0
    hits = 0
    n = 4000
    for i in range(n):
        pts = sample_ppp(lam, 3.0, _rep_rng(17, i)).points
        if pts.size == 0 or np.hypot(pts[:, 0], pts[:, 1]).min() > 1.0:
            hits += 1
    want = math.exp(-math.pi * lam)
    se = math.sqrt(want * (1 - want) / n)
    assert abs(hits / n - want) <= 3.5 * se


def test_ppp_seed_reproducible():
    a = sample_ppp(3.0, 4.0, _rep_rng(9, 123))
    b = sample_ppp(3.0, 4.0, _rep_rng(9, 123))
    np.testing.assert_array_equal(a.points, b.points)


def test_xi2_zero_offset_brackets_tau1():
    est = sample_xi2(0.0, NET33, MC)
    t1 = tau1(NET33)
    assert est.ci99_low <= t1 <= est.ci99_high


def test_xi2_decreases_with_offset():
    near = sample_xi2(0.1, NET33, MC)
    far = sample_xi2(0.4, NET33, MC)
    # Separation should dwarf the statistical noise.
    assert near.mean - far.mean > 3.0 * (near.std_error + far.std_error)


def test_xi2_brackets_exact_rate():
    est = sample_xi2(0.3, NET33, MC)
    want = tau2_exact(RateQuery(0.3, NET33, REDUCED_ACCURACY))
    assert est.ci99_low <= want <= est.ci99_high


def test_xi2_reproducible():
    a = sample_xi2(0.2, NET33, MC)
    b = sample_xi2(0.2, NET33, MC)
    assert a == b


def test_xi2_window_factor_insensitive():
    a = sample_xi2(0.2, NET33, McConfig(2000, 11, window_radius_factor=8.0))
    b = sample_xi2(0.2, NET33, McConfig(2000, 11, window_radius_factor=16.0))
    # The far-field compensation has to make the window size immaterial.
    assert abs(a.mean - b.mean) <= 2.576 * (a.std_error + b.std_error)


def test_n1_zero_length():
    est = estimate_n1(0.0, 3.0, MC)
    assert est == Estimate(0.0, 0.0, 0.0, 0.0, MC.replications)


def test_n1_brackets_analytic():
    est = estimate_n1(0.3, 3.0, MC)
    want = expected_handovers_nonskip(0.3, 3.0)
    assert est.ci99_low <= want <= est.ci99_high


def test_n1_step_refinement_stable():
    coarse = estimate_n1(0.3, 3.0, McConfig(2000, 11, segment_step=1e-3))
    fine = estimate_n1(0.3, 3.0, McConfig(2000, 11, segment_step=5e-4))
    assert abs(coarse.mean - fine.mean) <= \
        2.576 * (coarse.std_error + fine.std_error)


def test_n2_zero_length():
    est = estimate_n2(0.0, 3.0, MC)
    assert est.mean == 0.0 and est.std_error == 0.0


def test_n2_saturates():
    est = estimate_n2(5.0, 3.0, MC)
    assert est.mean >= 0.999


def test_n2_brackets_analytic():
    est = estimate_n2(0.5, 3.0, MC)
    want = handover_probability_skip(0.5, 3.0)
    # Indicator estimate at p-hat near 0.82 is comfortably normal here.
    assert est.ci99_low <= want <= est.ci99_high


def test_n2_reproducible():
    assert estimate_n2(0.5, 3.0, MC) == estimate_n2(0.5, 3.0, MC)


def test_q2_zero_cost_single_slot_is_rate():
    # With no cost, a single slot and no displacement, each period averages
    # the stationary rate sample.
    est = estimate_q2(SpeedLaw.deterministic(0.0), SkippingPolicy(1.0, 0.0),
                      NET33, MC)
    t1 = tau1(NET33)
    assert est.ci99_low <= t1 <= est.ci99_high


def test_q2_requires_integer_slots():
    with pytest.raises(ParameterError):
        estimate_q2(SpeedLaw.deterministic(0.1), SkippingPolicy(2.5, 1.0),
                    NET33, MC)


def test_q2_cost_reduces_value():
    law = SpeedLaw.deterministic(0.3)
    free = estimate_q2(law, SkippingPolicy(4.0, 0.0), NET33, MC)
    priced = estimate_q2(law, SkippingPolicy(4.0, 30.0), NET33, MC)
    assert priced.mean < free.mean


def test_q2_continuous_law_runs():
    est = estimate_q2(SpeedLaw.exponential(0.2), SkippingPolicy(4.0, 10.0),
                      NET33, McConfig(500, 3))
    assert est.n == 500
    assert math.isfinite(est.mean)


def test_se_shrinks_sqrt_n():
    small = sample_xi2(0.2, NET33, McConfig(1000, 11))
    large = sample_xi2(0.2, NET33, McConfig(4000, 11))
    ratio = large.std_error / small.std_error
    assert 0.4 <= ratio <= 0.6
