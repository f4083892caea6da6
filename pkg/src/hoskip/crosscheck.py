"""Analytic-versus-simulation cross-check suite.

Each check pits a closed-form or quadrature result against its Monte Carlo
estimator (or a hard invariant) and records a machine-readable row.  The
CLI ``validate`` subcommand runs the suite end to end; the acceptance tests
consume the same rows, so there is exactly one definition of every check.

Checks are grouped to mirror the numbered validation stages:

1. crossing counts along a segment (no skipping),
2. executed-handover probability per period (skipping),
3. stale-association rate vs sampled SINR,
4. the zero-offset identity between the stale and fresh rates,
5. blended-approximation quality,
9. quadrature and RNG contracts.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .datarate import REDUCED_ACCURACY, RateQuery, tau1, tau2_approx, \
    tau2_exact, tau2_refined
from .handover import expected_handovers_nonskip, handover_probability_skip
from .montecarlo import (McConfig, estimate_n1, estimate_n2, sample_ppp,
                         sample_xi2, _rep_rng)
from .params import NetworkParams
from .quadrature import QuadratureSpec, integrate_1d

__all__ = ["CheckRow", "run_validation", "STAGES"]

STAGES = (1, 2, 3, 4, 5, 9)


@dataclass(frozen=True)
class CheckRow:
    stage: int
    check: str
    value: float
    low: float
    high: float
    passed: bool
    elapsed: float


def _row(stage, check, value, low, high, t0) -> CheckRow:
    return CheckRow(stage, check, float(value), float(low), float(high),
                    bool(low <= value <= high), time.perf_counter() - t0)


def _stage1(reps: int, seed: int) -> list[CheckRow]:
    rows = []
    for l in (0.1, 0.3, 0.6):
        for lam in (1.0, 3.0, 5.0):
            t0 = time.perf_counter()
            est = estimate_n1(l, lam, McConfig(reps, seed))
            analytic = expected_handovers_nonskip(l, lam)
            rows.append(_row(1, f"n1_l{l}_lam{lam:g}", analytic,
                             est.ci99_low, est.ci99_high, t0))
    return rows


def _binom_ci99(mean: float, n: int) -> tuple[float, float]:
    """Exact (Clopper-Pearson) 99% interval for a Bernoulli proportion.

    The normal interval of an indicator estimate degenerates to a point
    once every replication fires, so saturated handover probabilities need
    the exact bound.
    """
    k = int(round(mean * n))
    low = 0.0 if k == 0 else float(stats.beta.ppf(0.005, k, n - k + 1))
    high = 1.0 if k == n else float(stats.beta.ppf(0.995, k + 1, n - k))
    return low, high


def _stage2(reps: int, seed: int) -> list[CheckRow]:
    rows = []
    for l in np.linspace(0.15, 1.5, 10):
        for lam in (1.0, 3.0, 5.0):
            t0 = time.perf_counter()
            est = estimate_n2(float(l), lam, McConfig(reps, seed))
            low, high = _binom_ci99(est.mean, est.n)
            analytic = handover_probability_skip(float(l), lam)
            rows.append(_row(2, f"n2_l{l:.2f}_lam{lam:g}", analytic,
                             low, high, t0))
    t0 = time.perf_counter()
    rows.append(_row(2, "n2_zero_length", handover_probability_skip(0.0, 3.0),
                     0.0, 1e-6, t0))
    t0 = time.perf_counter()
    rows.append(_row(2, "n2_saturation_l5_lam3",
                     handover_probability_skip(5.0, 3.0), 0.999, 1.0, t0))
    return rows


_RATE_NETS = ((1.0, 4.0), (5.0, 4.0), (3.0, 3.0))


def _stage3(reps: int, seed: int) -> list[CheckRow]:
    rows = []
    for lam, beta in _RATE_NETS:
        net = NetworkParams(lam, beta, 0.0)
        for u in (0.0, 0.1, 0.2, 0.3, 0.4):
            t0 = time.perf_counter()
            est = sample_xi2(u, net, McConfig(reps, seed))
            analytic = tau2_exact(RateQuery(u, net, REDUCED_ACCURACY))
            rows.append(_row(3, f"tau2_u{u:g}_lam{lam:g}_beta{beta:g}",
                             analytic, est.ci99_low, est.ci99_high, t0))
    return rows


def _stage4() -> list[CheckRow]:
    rows = []
    for lam, beta in _RATE_NETS:
        t0 = time.perf_counter()
        net = NetworkParams(lam, beta, 0.0)
        t2 = tau2_exact(RateQuery(0.0, net, REDUCED_ACCURACY))
        t1 = tau1(net)
        rows.append(_row(4, f"tau2_zero_offset_lam{lam:g}_beta{beta:g}",
                         abs(t2 - t1) / t1, 0.0, 1e-3, t0))
    return rows


def _stage5() -> list[CheckRow]:
    t0 = time.perf_counter()
    net = NetworkParams(3.0, 3.0, 0.0)
    grid = np.arange(0.0, 0.5001, 0.05)
    exact = np.array([tau2_exact(RateQuery(float(u), net, REDUCED_ACCURACY))
                      for u in grid])
    approx = np.array([tau2_approx(RateQuery(float(u), net)) for u in grid])
    refined = np.array([
        tau2_refined(RateQuery(float(u), net), 5.0) for u in grid])
    rms_a = math.sqrt(float(np.mean((approx - exact) ** 2)))
    rms_r = math.sqrt(float(np.mean((refined - exact) ** 2)))
    return [_row(5, "refined_rms_vs_approx_rms_lam3_beta3",
                 rms_r, 0.0, rms_a, t0)]


def _stage9(reps: int, seed: int) -> list[CheckRow]:
    rows = []

    t0 = time.perf_counter()
    spec = QuadratureSpec()
    f = lambda x: np.exp(-x)
    g = lambda x: 1.0 / (1.0 + x * x)
    combo = integrate_1d(lambda x: 2.0 * f(x) + 3.0 * g(x), (0.0, math.inf),
                         spec, vectorized=True)
    parts = (2.0 * integrate_1d(f, (0.0, math.inf), spec, vectorized=True).value
             + 3.0 * integrate_1d(g, (0.0, math.inf), spec,
                                  vectorized=True).value)
    tol = max(spec.abs_tol, spec.rel_tol * abs(parts)) * 4.0
    rows.append(_row(9, "quad_linearity", combo.value, parts - tol,
                     parts + tol, t0))

    t0 = time.perf_counter()
    whole = integrate_1d(f, (0.0, 5.0), spec, vectorized=True)
    split = (integrate_1d(f, (0.0, 1.7), spec, vectorized=True).value
             + integrate_1d(f, (1.7, 5.0), spec, vectorized=True).value)
    rows.append(_row(9, "quad_split_additivity", whole.value,
                     split - tol, split + tol, t0))

    t0 = time.perf_counter()
    draws = min(reps, 10000)
    counts = np.array([
        sample_ppp(3.0, 5.0, _rep_rng(seed, i)).points.shape[0]
        for i in range(draws)
    ])
    target = 3.0 * math.pi * 25.0
    se = math.sqrt(target / draws)
    rows.append(_row(9, "ppp_poisson_mean", float(counts.mean()),
                     target - 3.0 * se, target + 3.0 * se, t0))

    t0 = time.perf_counter()
    voids = np.array([
        sample_ppp(1.0, 1.0, _rep_rng(seed + 1, i)).points.shape[0] == 0
        for i in range(10 * draws)
    ])
    p = math.exp(-math.pi)
    se = math.sqrt(p * (1.0 - p) / (10 * draws))
    rows.append(_row(9, "ppp_void_probability", float(voids.mean()),
                     p - 3.0 * se, p + 3.0 * se, t0))

    t0 = time.perf_counter()
    net = NetworkParams(3.0, 4.0, 0.0)
    mc = McConfig(min(reps, 2000), seed)
    a = sample_xi2(0.2, net, mc)
    b = sample_xi2(0.2, net, mc)
    rows.append(_row(9, "seed_determinism", abs(a.mean - b.mean), 0.0, 0.0,
                     t0))

    t0 = time.perf_counter()
    small = sample_xi2(0.1, net, McConfig(max(reps // 4, 500), seed))
    large = sample_xi2(0.1, net, McConfig(max(reps // 4, 500) * 4, seed))
    rows.append(_row(9, "se_inverse_sqrt_n", large.std_error / small.std_error,
                     0.5 * 0.8, 0.5 * 1.2, t0))
    return rows


def run_validation(fast: bool = False, seed: int = 0) -> list[CheckRow]:
    """Run all validation stages; fast mode shrinks the sample budgets."""
    big = 2000 if fast else 100000
    mid = 1000 if fast else 10000
    rows = []
    rows.extend(_stage1(big, seed))
    rows.extend(_stage2(big, seed))
    rows.extend(_stage3(mid, seed))
    rows.extend(_stage4())
    rows.extend(_stage5())
    rows.extend(_stage9(mid, seed))
    return rows
