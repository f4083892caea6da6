"""Period-averaged evaluation: discrete sums, handover charges, and the
continuous-time relaxation against a literal quadrature oracle."""

import math

import numpy as np
import pytest

from hoskip.datarate import (REDUCED_ACCURACY, RateQuery, tau1, tau2_approx,
                             tau2_exact)
from hoskip.evaluation import (EvaluationQuery, RATE_METHODS, d1, d2, q1, q2,
                               q_tilde)
from hoskip.handover import handover_probability_skip
from hoskip.params import (NetworkParams, ParameterError, SkippingPolicy,
                           SpeedLaw)
from hoskip.quadrature import integrate_1d

NET33 = NetworkParams(3.0, 3.0, 0.0)
NET54 = NetworkParams(5.0, 4.0, 0.0)


def test_rate_methods_tuple():
    assert RATE_METHODS == ("exact", "approx", "refined")


def test_d1_is_linear_in_slots():
    t1 = tau1(NET33)
    assert d1(1.0, NET33) == pytest.approx(t1, rel=1e-12)
    assert d1(50.0, NET33) == pytest.approx(50.0 * t1, rel=1e-12)


def test_d2_single_slot_is_fresh_rate():
    got = d2(1, 0.5, NET33, rate_method="exact")
    want = tau2_exact(RateQuery(0.0, NET33, REDUCED_ACCURACY))
    assert got == pytest.approx(want, rel=1e-9)


def test_d2_zero_displacement_stacks_fresh_slots():
    got = d2(4, 0.0, NET33, rate_method="exact")
    want = 4.0 * tau2_exact(RateQuery(0.0, NET33, REDUCED_ACCURACY))
    assert got == pytest.approx(want, rel=1e-9)


def test_d2_requires_integer_slots():
    with pytest.raises(ParameterError):
        d2(2.5, 0.5, NET33)
    with pytest.raises(ParameterError):
        d2(0, 0.5, NET33)


def test_d2_methods_agree_roughly():
    # The approximation is a lower bound on each slot.
    exact = d2(4, 0.4, NET33, rate_method="exact")
    approx = d2(4, 0.4, NET33, rate_method="approx")
    refined = d2(4, 0.4, NET33, rate_method="refined", epsilon=5.0)
    assert approx <= exact + 1e-3
    assert approx <= refined <= 4.0 * tau1(NET33) + 1e-9


def test_q1_zero_cost_is_tau1():
    q = EvaluationQuery(SkippingPolicy(50.0, 0.0), NET54,
                        SpeedLaw.deterministic(0.2))
    assert q1(q) == pytest.approx(tau1(NET54), rel=1e-10)


def test_q1_fixed_speed_is_slot_count_invariant():
    # With displacement proportional to the period length, the handover
    # charge per slot is constant: q1 depends on v = l/s only.
    v = 0.004
    vals = [q1(EvaluationQuery(SkippingPolicy(float(s), 30.0), NET54,
                               SpeedLaw.deterministic(v * s)))
            for s in (10, 50, 250)]
    assert vals[0] == pytest.approx(vals[1], rel=1e-10)
    assert vals[1] == pytest.approx(vals[2], rel=1e-10)


def test_q1_closed_form():
    # tau1 - cost * (4 sqrt(lam) l / pi) / s
    s, cost, l = 50.0, 30.0, 0.2
    q = EvaluationQuery(SkippingPolicy(s, cost), NET54,
                        SpeedLaw.deterministic(l))
    want = tau1(NET54) - cost * 4.0 * math.sqrt(5.0) * l / math.pi / s
    assert q1(q) == pytest.approx(want, rel=1e-10)


def test_q2_zero_cost_zero_speed_is_fresh():
    q = EvaluationQuery(SkippingPolicy(4.0, 0.0), NET33,
                        SpeedLaw.deterministic(0.0), "exact")
    assert q2(q) == pytest.approx(
        tau2_exact(RateQuery(0.0, NET33, q.spec)), rel=1e-9)


def test_q2_more_slots_at_fixed_displacement_decreases():
    # Dyadic slot counts share their offset grids, so staleness only grows.
    # Consecutive values differ by ~5e-2, far above the reduced tolerance.
    vals = [q2(EvaluationQuery(SkippingPolicy(float(s), 0.0), NET33,
                               SpeedLaw.deterministic(0.4), "exact",
                               spec=REDUCED_ACCURACY))
            for s in (1, 2, 4, 8)]
    assert all(a >= b - 2e-4 for a, b in zip(vals, vals[1:]))


def test_q2_handover_charge_bounded():
    pol = SkippingPolicy(8.0, 25.0)
    law = SpeedLaw.deterministic(0.4)
    priced = q2(EvaluationQuery(pol, NET33, law, "exact",
                                spec=REDUCED_ACCURACY))
    free = q2(EvaluationQuery(SkippingPolicy(8.0, 0.0), NET33, law, "exact",
                              spec=REDUCED_ACCURACY))
    n2 = handover_probability_skip(0.4, 3.0, REDUCED_ACCURACY)
    assert priced == pytest.approx(free - 25.0 * n2 / 8.0, rel=1e-9)
    assert priced >= free - 25.0 / 8.0  # the probability never exceeds one


def test_q2_continuous_law_between_bounds():
    # Averaging over a displacement law keeps q2 inside the range spanned
    # by the extreme fixed displacements of (almost) all its mass.
    law = SpeedLaw.erlang(2, 0.3)
    got = q2(EvaluationQuery(SkippingPolicy(8.0, 10.0), NET33, law,
                             "refined"))
    lo = q2(EvaluationQuery(SkippingPolicy(8.0, 10.0), NET33,
                            SpeedLaw.deterministic(law.quantile(0.999)),
                            "refined"))
    hi = q2(EvaluationQuery(SkippingPolicy(8.0, 10.0), NET33,
                            SpeedLaw.deterministic(1e-9), "refined"))
    assert lo - 1e-6 <= got <= hi + 1e-6


def test_q2_rejects_noise_for_approximate_methods():
    noisy = NetworkParams(3.0, 3.0, 0.5)
    for method in ("approx", "refined"):
        with pytest.raises(ParameterError):
            EvaluationQuery(SkippingPolicy(4.0, 0.0), noisy,
                            SpeedLaw.deterministic(0.1), method)


def test_q2_rejects_unknown_method():
    with pytest.raises(ParameterError):
        EvaluationQuery(SkippingPolicy(4.0, 0.0), NET33,
                        SpeedLaw.deterministic(0.1), "spline")


def test_q_tilde_zero_speed():
    got = q_tilde(50.0, 0.0, NET33, 30.0)
    assert got == pytest.approx(tau2_approx(RateQuery(0.0, NET33)),
                                rel=1e-9)


def test_q_tilde_against_literal_quadrature():
    # Oracle: (1/v) int_0^v tau2_approx(s*w) dw - (cost/s) * N2(s*v).
    s, v, cost = 50.0, 0.003, 30.0

    def integrand(w):
        return np.array([tau2_approx(RateQuery(s * float(wi), NET33))
                         for wi in np.atleast_1d(w)])

    avg = integrate_1d(integrand, (0.0, v), vectorized=True)
    want = (avg.value / v
            - cost / s * handover_probability_skip(s * v, 3.0))
    got = q_tilde(s, v, NET33, cost)
    assert got == pytest.approx(want, rel=1e-6)


def test_q_tilde_tiny_speed_series_branch():
    # Exercise the series fallback far below the erf switchover.
    got = q_tilde(1.0, 1e-9, NET33, 0.0)
    assert got == pytest.approx(tau2_approx(RateQuery(0.0, NET33)),
                                rel=1e-6)


def test_q_tilde_cost_monotone():
    lo = q_tilde(50.0, 0.003, NET33, 10.0)
    hi = q_tilde(50.0, 0.003, NET33, 60.0)
    assert hi < lo


def test_q2_speed_law_ordering_more_variable_is_better():
    # At equal mean displacement, heavier-tailed laws spend more periods
    # nearly stationary, which pays off on the concave rate profile.
    pol = SkippingPolicy(50.0, 30.0, 10.0)
    laws = [
        SpeedLaw.deterministic(0.15),
        SpeedLaw.erlang(2, 0.15),
        SpeedLaw.exponential(0.15),
        SpeedLaw.hyper_exponential_balanced(0.15),
    ]
    vals = [q2(EvaluationQuery(pol, NET54, law, "refined")) for law in laws]
    assert vals[0] < vals[1] < vals[2] < vals[3]


def test_q_tilde_tracks_discrete_optimum():
    # q_tilde is the continuous relaxation of the unconditioned-interference
    # chain, so its maximizer should sit near the discrete optimum computed
    # with the matching rate method at the same speed.
    v, cost = 0.003, 30.0
    s_grid = np.unique(np.geomspace(2, 120, 28).astype(int))
    disc = [q2(EvaluationQuery(SkippingPolicy(float(s), cost), NET33,
                               SpeedLaw.deterministic(v * s), "approx"))
            for s in s_grid]
    s_disc = float(s_grid[int(np.argmax(disc))])
    cont = [q_tilde(float(s), v, NET33, cost) for s in s_grid]
    s_cont = float(s_grid[int(np.argmax(cont))])
    assert abs(s_cont - s_disc) / s_disc <= 0.5
