"""Monte Carlo ground truth for the analytic rate and handover formulas.

Deployments are homogeneous PPPs in a disk window around the origin, with
Rayleigh fading drawn fresh per (station, time slot).  Each replication is
seeded by a counter-based generator keyed on (seed, replication index), so
estimates are reproducible bit-for-bit and independent of any batching.

Interference is truncated at the window edge and the truncation is repaid
analytically: the expected far-field interference (unit-mean fading, density
lam) from outside the window is added as a deterministic term.  Without the
repayment the neglected tail is several percent of the interference at
beta = 3, visibly biasing the rate estimates upward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backends
from .params import NetworkParams, ParameterError, SkippingPolicy, SpeedLaw

__all__ = [
    "McConfig",
    "Estimate",
    "Deployment",
    "sample_ppp",
    "sample_xi2",
    "estimate_n1",
    "estimate_n2",
    "estimate_q2",
]

_Z99 = 2.576  # two-sided 99% normal quantile


@dataclass(frozen=True)
class McConfig:
    """Simulation budget, seeding and discretization knobs.

    ``window_radius_factor`` sets the deployment window as
    u_max + factor/sqrt(lam*pi); ``segment_step`` is the discretization of
    crossing counts along trajectories.
    """

    replications: int = 10000
    seed: int = 0
    window_radius_factor: float = 8.0
    segment_step: float = 1e-3

    def __post_init__(self):
        if not self.replications >= 1:
            raise ParameterError(
                f"replications must be >= 1, got {self.replications}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ParameterError(
                f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.window_radius_factor >= 4:
            raise ParameterError(
                f"window_radius_factor must be >= 4, got "
                f"{self.window_radius_factor}")
        if not self.segment_step > 0:
            raise ParameterError(
                f"segment_step must be > 0, got {self.segment_step}")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    ci99_low: float
    ci99_high: float
    n: int


def _estimate(samples: np.ndarray) -> Estimate:
    n = samples.size
    mean = float(samples.mean())
    se = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return Estimate(mean, se, mean - _Z99 * se, mean + _Z99 * se, n)


@dataclass(frozen=True)
class Deployment:
    """One PPP draw: station coordinates plus the stream for fading draws."""

    points: np.ndarray  # shape (n, 2)
    window_radius: float
    rng: np.random.Generator


def _rep_rng(seed: int, index: int) -> np.random.Generator:
    # Counter-based keying: (seed, replication) -> disjoint Philox streams,
    # independent of how replications are batched.
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | index))


def sample_ppp(lam: float, radius: float,
               rng_state: np.random.Generator) -> Deployment:
    """Draw a homogeneous PPP of density lam in a disk around the origin."""
    if not lam > 0:
        raise ParameterError(f"lam must be > 0, got {lam}")
    if not radius > 0:
        raise ParameterError(f"radius must be > 0, got {radius}")
    n = rng_state.poisson(lam * math.pi * radius * radius)
    r = radius * np.sqrt(rng_state.random(n))
    phi = 2.0 * math.pi * rng_state.random(n)
    points = np.column_stack((r * np.cos(phi), r * np.sin(phi)))
    return Deployment(points, radius, rng_state)


def _sample_ppp_nonempty(lam, radius, rng):
    dep = sample_ppp(lam, radius, rng)
    while dep.points.shape[0] == 0:  # astronomically rare at factor >= 4
        dep = sample_ppp(lam, radius, rng)
    return dep


def _far_field_mean(dist_from_center, radius, lam, beta):
    """Expected truncated interference at probe points inside the window.

    For a probe at distance d < radius from the window center, the distance
    to the window edge along direction phi is
    -d*cos(phi) + sqrt(radius^2 - d^2 sin^2(phi)); integrating the mean
    field lam*t^(1-beta) beyond it gives the repayment term.  The phi
    integral is periodic and smooth, so a trapezoid rule converges
    geometrically.
    """
    d = np.atleast_1d(np.asarray(dist_from_center, dtype=float))
    phi = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)
    sin2 = np.sin(phi) ** 2
    rho0 = (-d[:, None] * np.cos(phi)[None, :]
            + np.sqrt(radius * radius - d[:, None] ** 2 * sin2[None, :]))
    vals = rho0 ** (2.0 - beta)
    integral = vals.mean(axis=1) * 2.0 * math.pi
    out = lam / (beta - 2.0) * integral
    return out if np.ndim(dist_from_center) else float(out[0])


def sample_xi2(u: float, net: NetworkParams, mc: McConfig) -> Estimate:
    """Sampled rate at offset (u, 0) with the serving station nearest to the origin.

    Each replication draws a fresh deployment and fading; the rate sample is
    log(1 + SINR) at the probe, with interference from all non-serving
    stations in the window plus the analytic far-field repayment.  At u = 0
    this estimates the nearest-association rate.
    """
    if not u >= 0:
        raise ParameterError(f"u must be >= 0, got {u}")
    net.validate()
    lam, beta, sigma2 = net.lam, net.beta, net.sigma2
    radius = u + mc.window_radius_factor / math.sqrt(lam * math.pi)
    tail = _far_field_mean(u, radius, lam, beta)
    samples = np.empty(mc.replications)
    for i in range(mc.replications):
        rng = _rep_rng(mc.seed, i)
        dep = _sample_ppp_nonempty(lam, radius, rng)
        pts = dep.points
        d0 = np.hypot(pts[:, 0], pts[:, 1])
        b = int(np.argmin(d0))
        dp = np.hypot(pts[:, 0] - u, pts[:, 1])
        h = rng.exponential(1.0, pts.shape[0])
        power = h * dp ** (-beta)
        signal = power[b]
        interference = power.sum() - signal + tail
        samples[i] = math.log1p(signal / (sigma2 + interference))
    return _estimate(samples)


def estimate_n1(l: float, lam: float, mc: McConfig) -> Estimate:
    """Mean number of serving-cell changes along a segment of length l.

    Counts nearest-station identity changes on a grid of at most
    ``segment_step`` spacing; cells are convex, so grid-level changes can
    only undercount, and the step is far below typical cell width.
    """
    if not l >= 0:
        raise ParameterError(f"l must be >= 0, got {l}")
    if not lam > 0:
        raise ParameterError(f"lam must be > 0, got {lam}")
    if l == 0.0:
        return Estimate(0.0, 0.0, 0.0, 0.0, mc.replications)
    radius = l + mc.window_radius_factor / math.sqrt(lam * math.pi)
    n_steps = max(1, math.ceil(l / mc.segment_step))
    step = l / n_steps
    samples = np.empty(mc.replications)
    for i in range(mc.replications):
        rng = _rep_rng(mc.seed, i)
        dep = _sample_ppp_nonempty(lam, radius, rng)
        pts = dep.points
        samples[i] = backends.segment_change_count(
            np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
            0.0, 0.0, 1.0, 0.0, step, n_steps)
    return _estimate(samples)


def estimate_n2(l: float, lam: float, mc: McConfig) -> Estimate:
    """Fraction of deployments whose nearest station differs at (0,0) and (l,0).

    Because the cells are convex this is exactly the probability that a
    length-l displacement ends outside its starting cell.
    """
    if not l >= 0:
        raise ParameterError(f"l must be >= 0, got {l}")
    if not lam > 0:
        raise ParameterError(f"lam must be > 0, got {lam}")
    radius = l + mc.window_radius_factor / math.sqrt(lam * math.pi)
    samples = np.empty(mc.replications)
    for i in range(mc.replications):
        rng = _rep_rng(mc.seed, i)
        dep = _sample_ppp_nonempty(lam, radius, rng)
        pts = dep.points
        d0 = (pts[:, 0]) ** 2 + pts[:, 1] ** 2
        dl = (pts[:, 0] - l) ** 2 + pts[:, 1] ** 2
        samples[i] = 1.0 if np.argmin(d0) != np.argmin(dl) else 0.0
    return _estimate(samples)


def estimate_q2(law: SpeedLaw, policy: SkippingPolicy, net: NetworkParams,
                mc: McConfig) -> Estimate:
    """End-to-end per-period evaluation of skipping: rate minus handover cost.

    Per replication: draw the period displacement L and a uniform direction,
    deploy a network, fix the serving station nearest to the start, sum the
    sampled rates at the s slot offsets t*L/s (fresh fading each slot),
    subtract the cost if the endpoint lands in a different cell, divide
    by s.
    """
    law.validate()
    policy.validate()
    net.validate()
    s_float = policy.s
    if s_float != int(s_float) or int(s_float) < 1:
        raise ParameterError(
            f"s must be a positive integer for the slotted evaluation, "
            f"got {s_float}")
    s = int(s_float)
    lam, beta, sigma2 = net.lam, net.beta, net.sigma2
    cost = policy.cost
    base = mc.window_radius_factor / math.sqrt(lam * math.pi)
    samples = np.empty(mc.replications)
    for i in range(mc.replications):
        rng = _rep_rng(mc.seed, i)
        length = float(law.sample(1, rng)[0])
        psi = 2.0 * math.pi * rng.random()
        direction = np.array([math.cos(psi), math.sin(psi)])
        radius = length + base
        dep = _sample_ppp_nonempty(lam, radius, rng)
        pts = dep.points
        offsets = (length / s) * np.arange(s + 1)
        probes = offsets[:, None] * direction[None, :]
        diff = probes[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff ** 2).sum(axis=2))  # (s+1, n)
        b = int(np.argmin(dist[0]))
        h = rng.exponential(1.0, (s, pts.shape[0]))
        power = h * dist[:s] ** (-beta)
        signal = power[:, b]
        tail = _far_field_mean(offsets[:s], radius, lam, beta)
        interference = power.sum(axis=1) - signal + tail
        data = np.log1p(signal / (sigma2 + interference)).sum()
        handover = np.argmin(dist[s]) != b
        samples[i] = (data - (cost if handover else 0.0)) / s
    return _estimate(samples)
