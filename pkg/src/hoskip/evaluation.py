"""Per-period evaluation of handover policies: data received minus cost.

Scenario 1 hands over continuously (rate tau1 always, but every boundary
crossing costs C); scenario 2 skips all handovers within each period of
length s seconds (rate decays with offset as tau2, but at most one handover
is executed per period).  Both evaluation functions divide by s to give
nats per second net of signaling cost.

``q_tilde`` is the continuous-time relaxation of q2 used by the optimizer:
the slot sum becomes an integral over the offset, with the unconditioned
rate as integrand.  Swapping its two integrals turns the offset average
into an error-function factor, leaving a single semi-infinite integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import erf

from .datarate import (REDUCED_ACCURACY, RateQuery, _sinr_threshold,
                       k_factor, tau1, tau2_approx, tau2_exact, tau2_refined)
from .handover import (expected_handovers_nonskip, handover_probability_skip,
                       _handover_probability_skip)
from .params import (NetworkParams, ParameterError, SkippingPolicy, SpeedLaw)
from .quadrature import ConvergenceError, QuadratureSpec, integrate_1d

__all__ = [
    "EvaluationQuery",
    "RATE_METHODS",
    "d1",
    "d2",
    "q1",
    "q2",
    "q_tilde",
]

RATE_METHODS = ("exact", "approx", "refined")


@dataclass(frozen=True)
class EvaluationQuery:
    """Everything q1/q2 need: policy, network, speed law and rate model."""

    policy: SkippingPolicy
    net: NetworkParams
    law: SpeedLaw
    rate_method: str = "refined"
    spec: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        self.policy.validate()
        self.net.validate()
        self.law.validate()
        if self.rate_method not in RATE_METHODS:
            raise ParameterError(
                f"rate_method must be one of {RATE_METHODS}, "
                f"got {self.rate_method!r}")
        if self.rate_method in ("approx", "refined") and self.net.sigma2 != 0:
            raise ParameterError(
                f"sigma2 must be 0 for rate_method={self.rate_method!r}, "
                f"got {self.net.sigma2}")


def _rate_fn(method: str, net: NetworkParams, epsilon: float,
             spec: QuadratureSpec):
    if method == "exact":
        return lambda u: tau2_exact(RateQuery(u, net, spec))
    if method == "approx":
        return lambda u: tau2_approx(RateQuery(u, net, spec))
    return lambda u: tau2_refined(RateQuery(u, net, spec), epsilon)


def d1(s: float, net: NetworkParams,
       spec: QuadratureSpec | None = None) -> float:
    """Expected nats received over one period without skipping: s*tau1."""
    if not s > 0:
        raise ParameterError(f"s must be > 0, got {s}")
    return s * tau1(net, spec)


def _check_slots(s) -> int:
    if float(s) != int(s) or int(s) < 1:
        raise ParameterError(
            f"s must be a positive integer count of slots, got {s}")
    return int(s)


def d2(s, l: float, net: NetworkParams, rate_method: str = "exact",
       epsilon: float = 10.0, spec: QuadratureSpec | None = None) -> float:
    """Expected nats over one skipping period: slot sum of the stale rate.

    The serving station is fixed at the period start; slot t sits at offset
    l*t/s, so the sum runs over t = 0 .. s-1 of the selected rate variant.
    """
    slots = _check_slots(s)
    if not l >= 0:
        raise ParameterError(f"l must be >= 0, got {l}")
    if rate_method not in RATE_METHODS:
        raise ParameterError(
            f"rate_method must be one of {RATE_METHODS}, got {rate_method!r}")
    if spec is None:
        spec = REDUCED_ACCURACY if rate_method == "exact" else QuadratureSpec()
    rate = _rate_fn(rate_method, net, epsilon, spec)
    return float(sum(rate(l * t / slots) for t in range(slots)))


def q1(q: EvaluationQuery) -> float:
    """Net rate without skipping: tau1 minus cost times the crossing rate.

    The crossing count is linear in the distance moved, so only the law's
    mean enters.
    """
    mean_l = q.law.mean_displacement()
    crossings = expected_handovers_nonskip(mean_l, q.net.lam)
    return tau1(q.net, q.spec) - q.policy.cost * crossings / q.policy.s


# ---------------------------------------------------------------------------
# Rate tables: continuous-law averaging needs the rate variant at thousands
# of offsets, so it is tabulated once per (method, network) on a fixed grid
# and interpolated monotonically.  Grid caps are quantized to powers of two
# so sweeps at slightly different truncation points share one table.


_TABLE_POINTS = {"exact": 97, "approx": 769}


@lru_cache(maxsize=64)
def _rate_table(method: str, lam: float, beta: float, u_cap: float,
                spec: QuadratureSpec):
    n = _TABLE_POINTS[method]
    grid = np.linspace(0.0, u_cap, n)
    net = NetworkParams(lam, beta, 0.0)
    if method == "exact":
        vals = np.array([tau2_exact(RateQuery(u, net, spec)) for u in grid])
    else:
        vals = np.array([tau2_approx(RateQuery(u, net, spec)) for u in grid])
    return PchipInterpolator(grid, vals, extrapolate=False)


def _tabulated_rate(method: str, net: NetworkParams, epsilon: float,
                    u_max: float, spec: QuadratureSpec):
    """Vectorized stale-rate variant valid on [0, u_max]."""
    u_cap = 2.0 ** math.ceil(math.log2(max(u_max, 1e-6)))
    base = "exact" if method == "exact" else "approx"
    table_spec = REDUCED_ACCURACY if base == "exact" else spec
    table = _rate_table(base, net.lam, net.beta, u_cap, table_spec)
    if method == "refined":
        t1 = tau1(net, spec)

        def rate(u):
            w = np.exp(-epsilon * u)
            return w * t1 + (1.0 - w) * table(u)

        return rate
    return table


def q2(q: EvaluationQuery) -> float:
    """Net rate with skipping: (E[D2(s, L)] - C*E[HO executed]) / s.

    Point-mass laws evaluate the slot sum directly; continuous laws average
    it against the density, truncated at the 1-1e-10 quantile.
    """
    slots = _check_slots(q.policy.s)
    cost = q.policy.cost
    net, law, spec = q.net, q.law, q.spec
    if law.kind == "deterministic":
        l = law.params["l"]
        data = d2(slots, l, net, q.rate_method, q.policy.epsilon, spec)
        return (data - cost * handover_probability_skip(l, net.lam, spec)) / slots

    l_hi = law.quantile(1.0 - 1e-10)
    rate = _tabulated_rate(q.rate_method, net, q.policy.epsilon, l_hi, spec)
    t_over_s = np.arange(slots) / slots

    def integrand(l):
        data = rate(l[:, None] * t_over_s[None, :]).sum(axis=1)
        ho = np.array([handover_probability_skip(x, net.lam, spec) for x in l])
        return law.pdf(l) * (data - cost * ho)

    res = integrate_1d(integrand, (0.0, l_hi), spec, vectorized=True)
    if not res.converged:
        raise ConvergenceError("speed-law average of the period value", res)
    return res.value / slots


def _q_tilde_result(s: float, v: float, net: NetworkParams, cost: float,
                    spec: QuadratureSpec):
    """(value, error_estimate) of the continuous relaxation at skipping time s."""
    if not s > 0:
        raise ParameterError(f"s must be > 0, got {s}")
    if not v >= 0:
        raise ParameterError(f"v must be >= 0, got {v}")
    net.validate()
    if net.sigma2 != 0:
        raise ParameterError(
            f"sigma2 must be 0 for the continuous relaxation, "
            f"got {net.sigma2}")
    beta, lam = net.beta, net.lam
    sv = s * v

    def integrand(zeta):
        k = k_factor(_sinr_threshold(zeta), beta)
        g = 1.0 / (1.0 + k)
        a = math.pi * lam * s * s * k / (1.0 + k)
        root = np.sqrt(a) * v
        # Mean of exp(-a w^2) over w ~ U(0, v); series below the erf
        # cancellation threshold, exact limit 1 at v = 0.
        small = root < 1e-6
        safe = np.where(small, 1.0, root)
        avg = np.where(small, 1.0 - root * root / 3.0,
                       0.5 * math.sqrt(math.pi) * erf(safe) / safe)
        return g * avg

    res = integrate_1d(integrand, (0.0, math.inf), spec, vectorized=True)
    if not res.converged:
        raise ConvergenceError("offset-averaged rate integral", res)
    if sv == 0.0:
        return res.value, res.error_estimate
    ho = _handover_probability_skip(float(sv), float(lam), spec)
    if not ho.converged:
        raise ConvergenceError("handover probability integral", ho)
    ho_val = min(max(ho.value, 0.0), 1.0)
    return (res.value - cost / s * ho_val,
            res.error_estimate + cost / s * ho.error_estimate)


def q_tilde(s: float, v: float, net: NetworkParams, cost: float,
            spec: QuadratureSpec | None = None) -> float:
    """Continuous relaxation of q2: offset-averaged rate minus cost term.

    Equals (1/v) * int_0^v tau2_approx(s*w) dw - (cost/s) * P(handover at
    s*v), with the offset average folded into the rate integral in closed
    form.  At v = 0 it degenerates by continuity to tau2_approx(0).
    """
    if spec is None:
        spec = QuadratureSpec()
    value, _ = _q_tilde_result(s, v, net, cost, spec)
    return value
