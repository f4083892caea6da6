"""Expected downlink rates under nearest-BS and stale association.

All rates are E[log(1+SINR)] in nats per unit time for a Rayleigh-fading
Poisson network, computed through the identity E[log(1+X)] =
int_0^inf P(X > e^zeta - 1) dzeta.

``tau1`` is the rate of a user served by its nearest station.  ``tau2_exact``
is the rate at offset u from the point where the serving station was chosen
as nearest: the serving distance grows stale while the interference field
stays conditioned on the original association void.  ``tau2_approx`` drops
that conditioning (every station beyond the serving one interferes) and
``tau2_refined`` blends the two with an exponential weight in u.

The stale-association Laplace transform is evaluated in deficit form: the
conditional interference exponent over the punctured plane equals the
unconditional full-plane exponent, which is known in closed form, minus the
contribution of the void disk.  The void-disk part is a smooth integral over
an annulus and is discretized once per (serving distance, offset) pair into
weight/path-loss arrays, after which every SINR-threshold node costs one
batched rational sum -- the kernel the compiled backend accelerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from . import backends
from .params import NetworkParams, ParameterError
from .quadrature import (ConvergenceError, QuadratureSpec, QuadResult,
                         integrate_1d, integrate_nested)

__all__ = [
    "RateQuery",
    "BudgetExceededError",
    "REDUCED_ACCURACY",
    "k_factor",
    "tau1",
    "tau2_exact",
    "tau2_approx",
    "tau2_refined",
    "fit_epsilon",
]

#: Tolerances intended for parameter sweeps of tau2_exact; the full default
#: accuracy is overkill against Monte Carlo references.
REDUCED_ACCURACY = QuadratureSpec(rel_tol=1e-4, abs_tol=1e-12)


class BudgetExceededError(RuntimeError):
    """The stale-rate integral hit its evaluation budget before finishing."""

    def __init__(self, evaluations: int, budget: int):
        self.evaluations = evaluations
        self.budget = budget
        super().__init__(
            f"evaluation budget exhausted: {evaluations} integrand samples "
            f"exceed the budget of {budget}"
        )


@dataclass(frozen=True)
class RateQuery:
    """Rate evaluation point: offset u from the association instant."""

    u: float
    net: NetworkParams
    spec: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.u >= 0:
            raise ParameterError(f"u must be >= 0, got {self.u}")
        self.net.validate()


def k_factor(z, beta: float):
    """Full-plane interference exponent coefficient (2*pi/beta)*z^(2/beta)*csc(2*pi/beta).

    ``z`` may be an array.  This is the exponent of the Rayleigh-fading
    Laplace transform of PPP interference with *no* exclusion region,
    normalized by pi*lam*d^2 of the serving link.
    """
    if not beta > 2:
        raise ParameterError(f"beta must be > 2, got {beta}")
    z = np.asarray(z, dtype=float)
    csc = 1.0 / math.sin(2.0 * math.pi / beta)
    out = (2.0 * math.pi / beta) * csc * z ** (2.0 / beta)
    return out if out.ndim else float(out)


def _guard_coeff(z, beta: float):
    """Like k_factor, but for interference excluded from the serving disk.

    Closed form of 2*int_1^inf z*t/(z + t^beta) dt via the regularized
    incomplete beta function; this is the nearest-BS (guard-zone) analogue
    of k_factor and tends to it as z -> inf.
    """
    z = np.asarray(z, dtype=float)
    x = z / (1.0 + z)
    return k_factor(z, beta) * special.betainc(1.0 - 2.0 / beta,
                                               2.0 / beta, x)


# ---------------------------------------------------------------------------
# tau1: nearest-BS association


def _sinr_threshold(zeta):
    """Map the log-rate variable back to an SINR threshold, z = e^zeta - 1.

    All rate integrals run over zeta, using E[log(1+X)] =
    int_0^inf P(X > e^zeta - 1) dzeta: the substitution removes the
    1/(1+z) factor whose slow tail otherwise starves the adaptive rule
    near small serving distances.  Clamped so downstream powers and
    rational terms stay finite where the integrand is already zero.
    """
    return np.minimum(np.expm1(np.minimum(zeta, 646.0)), 1e280)


@lru_cache(maxsize=1024)
def _tau1_cached(lam: float, beta: float, sigma2: float,
                 spec: QuadratureSpec) -> float:
    if sigma2 == 0.0:
        def f(zeta):
            z = _sinr_threshold(zeta)
            return 1.0 / (1.0 + _guard_coeff(z, beta))

        res = integrate_1d(f, (0.0, math.inf), spec, vectorized=True)
    else:
        # Substituting t = pi*lam*r^2 in the serving-distance average:
        # tau1 = int_zeta int_t exp(-t(1+c(z)) -
        #        sigma2*z*(t/(pi lam))^(beta/2)) dt dzeta.
        def f(zeta, t):
            z = _sinr_threshold(np.asarray(zeta))
            c = _guard_coeff(z, beta)
            noise = sigma2 * z * (t / (math.pi * lam)) ** (0.5 * beta)
            return np.exp(-t * (1.0 + c) - noise)

        res = integrate_nested(f, [(0.0, math.inf), (0.0, math.inf)],
                               spec, vectorized=True)
    if not res.converged:
        raise ConvergenceError("nearest-association rate integral", res)
    return res.value


def tau1(net: NetworkParams, spec: QuadratureSpec | None = None) -> float:
    """Expected rate with nearest-station association, nats per unit time.

    Interference-limited deployments (sigma2 = 0) are scale invariant, so
    the density drops out of the integral entirely.
    """
    net.validate()
    if spec is None:
        spec = QuadratureSpec()
    lam = 1.0 if net.sigma2 == 0.0 else net.lam
    return _tau1_cached(lam, net.beta, net.sigma2, spec)


# ---------------------------------------------------------------------------
# tau2_exact: stale association, conditioned interference


_GL_NODES = 48
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_NODES)
_GL_T = 0.5 * (_GL_X + 1.0)
# Cosine-stretched map of [0,1] onto [0,1]: clusters nodes at both segment
# ends, where the annulus angle psi(w) has square-root kinks.
_COS_MAP = 0.5 * (1.0 - np.cos(np.pi * _GL_T))
_COS_WT = 0.25 * np.pi * np.sin(np.pi * _GL_T) * _GL_W


def _void_deficit_context(r: float, u: float, beta: float):
    """Discretize the void-disk interference deficit around the probe point.

    The association void is the disk D(start, r); the probe sits at
    distance u from its center.  In probe-centered polar coordinates the
    void occupies, at radius w, an arc of angle psi(w): the full circle for
    w < r - u (probe inside the void) and 2*arccos((u^2+w^2-r^2)/(2uw)) on
    the overlap annulus.  Returns (coeff, w_beta) such that the deficit of
    the interference exponent at SINR-scale y is sum coeff*y/(y + w_beta).
    """
    segments = []
    if u < r:
        segments.append((0.0, r - u, True))
        if u > 0.0:
            segments.append((r - u, r + u, False))
    elif u > r:
        segments.append((u - r, u + r, False))
    else:
        segments.append((0.0, 2.0 * r, False))
    coeff_parts, wbeta_parts = [], []
    for a, b, full in segments:
        if not b > a:
            continue
        w = a + (b - a) * _COS_MAP
        wt = (b - a) * _COS_WT
        if full:
            psi = 2.0 * math.pi
        else:
            psi = 2.0 * np.arccos(
                np.clip((u * u + w * w - r * r) / (2.0 * u * w), -1.0, 1.0))
        coeff_parts.append(wt * psi * w)
        wbeta_parts.append(w ** beta)
    return (np.ascontiguousarray(np.concatenate(coeff_parts)),
            np.ascontiguousarray(np.concatenate(wbeta_parts)))


@lru_cache(maxsize=4096)
def _tau2_exact_cached(u: float, lam: float, beta: float, sigma2: float,
                       spec: QuadratureSpec, max_evaluations: int) -> float:
    r_max = 6.0 / math.sqrt(lam * math.pi)
    c_plane = 2.0 * math.pi ** 2 / (beta * math.sin(2.0 * math.pi / beta))
    two_over_beta = 2.0 / beta
    # Split the tolerance budget as in integrate_nested: the propagated
    # estimate (outer error plus worst inner relative errors) must still
    # land under the caller's target.
    outer_spec = spec.scaled(0.5)
    inner_spec = spec.scaled(0.1)
    evals = [0]
    # Worst absolute error and largest magnitude per inner level (z, theta),
    # composed like integrate_nested: the contribution of a level's errors
    # to the outer value is bounded by |outer| * worst_err / level_scale.
    worst_err = [0.0, 0.0]
    level_scale = [0.0, 0.0]

    def track(res: QuadResult, level: int) -> float:
        worst_err[level] = max(worst_err[level], res.error_estimate)
        level_scale[level] = max(level_scale[level], abs(res.value))
        return res.value

    def rate_kernel(coeff, w_beta, w0: float):
        w0b = w0 ** beta

        def f(zeta):
            evals[0] += zeta.size
            if evals[0] > max_evaluations:
                raise BudgetExceededError(evals[0], max_evaluations)
            y = np.minimum(_sinr_threshold(zeta) * w0b, 1e280)
            deficit = backends.deficit_sum(coeff, w_beta, y)
            expo = -lam * (c_plane * y ** two_over_beta - deficit)
            if sigma2 != 0.0:
                expo = expo - sigma2 * y
            return np.exp(expo)

        return track(integrate_1d(f, (0.0, math.inf), inner_spec,
                                  vectorized=True), 0)

    def r_integrand(r: float) -> float:
        ctx = _void_deficit_context(r, u, beta)
        weight = 2.0 * math.pi * lam * r * math.exp(-math.pi * lam * r * r)
        if u == 0.0:
            return weight * rate_kernel(*ctx, r)

        def theta_integrand(theta: float) -> float:
            w0 = math.sqrt(max(
                u * u + r * r - 2.0 * u * r * math.cos(theta), 0.0))
            return rate_kernel(*ctx, w0)

        avg = track(integrate_1d(theta_integrand, (0.0, math.pi),
                                 inner_spec), 1)
        return weight * avg / math.pi

    outer = integrate_1d(r_integrand, (0.0, r_max), outer_spec)
    err = outer.error_estimate + abs(outer.value) * sum(
        e / max(s, 1e-300) for e, s in zip(worst_err, level_scale))
    if not (outer.converged and err <= spec.tolerance(outer.value)):
        raise ConvergenceError(
            "stale-association rate integral",
            QuadResult(outer.value, err, False, evals[0]))
    return outer.value


def tau2_exact(q: RateQuery, max_evaluations: int = 200_000_000) -> float:
    """Expected rate at offset u from the association instant, exact model.

    The serving station is the one nearest at the period start; at offset u
    the interference field excludes only the original association disk.
    Triple adaptive quadrature (serving distance, bearing, log-SINR
    threshold) around the batched void-deficit kernel.

    Raises
    ------
    ConvergenceError
        If any quadrature level misses the requested tolerance.
    BudgetExceededError
        If the total number of innermost samples exceeds ``max_evaluations``
        first (reported distinctly from non-convergence).
    """
    return _tau2_exact_cached(float(q.u), q.net.lam, q.net.beta,
                              q.net.sigma2, q.spec, int(max_evaluations))


# ---------------------------------------------------------------------------
# tau2_approx / tau2_refined: unconditioned interference


@lru_cache(maxsize=8192)
def _tau2_approx_cached(u_scaled: float, beta: float,
                        spec: QuadratureSpec) -> float:
    a = math.pi * u_scaled * u_scaled

    def f(zeta):
        k = k_factor(_sinr_threshold(zeta), beta)
        return np.exp(-a * k / (1.0 + k)) / (1.0 + k)

    res = integrate_1d(f, (0.0, math.inf), spec, vectorized=True)
    if not res.converged:
        raise ConvergenceError("unconditioned stale-rate integral", res)
    return res.value


def tau2_approx(q: RateQuery) -> float:
    """Stale-association rate with the association void ignored.

    Every station other than the serving one interferes, which lower-bounds
    the exact rate; the gap closes as u grows and the probe leaves the
    void's influence.  Only the interference-limited case makes sense here.
    The density enters solely through u*sqrt(lam), and the implementation
    evaluates in those units, making the scale invariance exact.
    """
    if q.net.sigma2 != 0.0:
        raise ParameterError(
            f"sigma2 must be 0 for the unconditioned approximation, "
            f"got {q.net.sigma2}")
    return _tau2_approx_cached(q.u * math.sqrt(q.net.lam), q.net.beta,
                               q.spec)


def tau2_refined(q: RateQuery, epsilon: float) -> float:
    """Exponential blend exp(-eps*u)*tau1 + (1-exp(-eps*u))*tau2_approx.

    Interpolates between the fresh-association rate at u = 0 (where the
    unconditioned approximation is worst) and the approximation at large u
    (where it is asymptotically exact).
    """
    if not epsilon >= 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    weight = math.exp(-epsilon * q.u)
    t1 = tau1(q.net, q.spec)
    if weight == 1.0:
        return t1
    return weight * t1 + (1.0 - weight) * tau2_approx(q)


def fit_epsilon(net: NetworkParams, u_grid, spec: QuadratureSpec | None = None,
                max_evaluations: int = 200_000_000) -> float:
    """Least-squares fit of the blend decay rate against the exact rate.

    Minimizes sum_u (tau2_refined(u; eps) - tau2_exact(u))^2 over
    eps in [0, 100] by bounded scalar search.  A flat objective (e.g. a grid
    where the blend endpoints already agree with the exact rate) returns the
    smallest admissible value.
    """
    net.validate()
    if net.sigma2 != 0.0:
        raise ParameterError(
            f"sigma2 must be 0 to fit the blend, got {net.sigma2}")
    u_grid = [float(u) for u in u_grid]
    if not u_grid:
        raise ParameterError("u_grid must be nonempty, got []")
    if spec is None:
        spec = REDUCED_ACCURACY
    t1 = tau1(net, spec)
    t2p = np.array([tau2_approx(RateQuery(u, net, spec)) for u in u_grid])
    target = np.array([
        tau2_exact(RateQuery(u, net, spec), max_evaluations)
        for u in u_grid
    ])
    u = np.array(u_grid)

    def sse(eps: float) -> float:
        w = np.exp(-eps * u)
        return float(np.sum((w * t1 + (1.0 - w) * t2p - target) ** 2))

    probes = [sse(e) for e in (0.0, 1.0, 10.0, 100.0)]
    if max(probes) - min(probes) <= 1e-12 * max(1.0, max(probes)):
        return 0.0
    res = optimize.minimize_scalar(sse, bounds=(0.0, 100.0),
                                   method="bounded",
                                   options={"xatol": 1e-4})
    return float(res.x)
