"""Adaptive quadrature for the improper and nested integrals of the model.

Everything analytic in this package reduces to smooth 1-D integrals over
finite or semi-infinite intervals, possibly nested two or three deep.  The
workhorse is a 7/15 Gauss-Kronrod rule with priority-queue interval
subdivision; semi-infinite domains are mapped to [0, 1) by a rational or
exponential change of variable.  Integrands may be scalar or vectorized
(accepting an ndarray of abscissae), which the inner loops of the rate
integrals rely on heavily.

Results carry an error estimate and a convergence flag instead of raising on
slow convergence, so callers can decide what failure means for them.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "IntegrandDomainError",
    "ConvergenceError",
    "integrate_1d",
    "integrate_nested",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for adaptive integration.

    Attributes
    ----------
    rel_tol, abs_tol : float
        The target: total error estimate <= max(abs_tol, rel_tol*|value|).
    max_subdivisions : int
        Interval bisection budget per 1-D integral.
    infinite_transform : str
        'rational' maps x = a + t/(1-t); 'exponential' maps x = a - log(1-t).
        Both send [0, inf) to [0, 1).
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    infinite_transform: str = "rational"

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if not self.max_subdivisions >= 1:
            raise ValueError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )
        if self.infinite_transform not in ("rational", "exponential"):
            raise ValueError(
                "infinite_transform must be 'rational' or 'exponential', "
                f"got {self.infinite_transform!r}"
            )

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def scaled(self, factor: float) -> "QuadratureSpec":
        """Same limits with tolerances tightened by ``factor``."""
        return QuadratureSpec(
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            max_subdivisions=self.max_subdivisions,
            infinite_transform=self.infinite_transform,
        )


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    converged: bool
    evaluations: int


class IntegrandDomainError(ValueError):
    """Integrand returned a non-finite sample at an interior point."""

    def __init__(self, abscissa: float, sample: float):
        self.abscissa = abscissa
        self.sample = sample
        super().__init__(
            f"integrand returned {sample!r} at x={abscissa!r}"
        )


class ConvergenceError(RuntimeError):
    """Raised by callers that cannot tolerate an unconverged integral."""

    def __init__(self, what: str, result: QuadResult):
        self.result = result
        super().__init__(
            f"{what} did not converge: value={result.value!r}, "
            f"error_estimate={result.error_estimate!r} after "
            f"{result.evaluations} evaluations"
        )


# 15-point Kronrod extension of 7-point Gauss, nodes ascending on [-1, 1].
# Odd indices (1, 3, ..., 13) are the embedded Gauss-7 nodes.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_GAUSS_IDX = np.arange(1, 15, 2)


def _identity_map(t):
    return t, np.ones_like(t)


def _rational_map(a):
    # Infinity sits at t = 0: panel nodes are strictly interior, and with a
    # subdivision budget of n the smallest reachable node is ~2^-n, so the
    # map never lands on the singular endpoint while the usable tail extends
    # to x ~ 2^n (no truncation of heavy algebraic tails).
    def fwd(t):
        return a + (1.0 - t) / t, 1.0 / (t * t)

    return fwd


def _exponential_map(a):
    def fwd(t):
        return a - np.log(t), 1.0 / t

    return fwd


def _wrap(f, domain, spec, vectorized):
    """Return (g, t_lo, t_hi) with g vectorized over transformed abscissae."""
    a, b = float(domain[0]), float(domain[1])
    if not math.isfinite(a):
        raise ValueError("lower integration bound must be finite")
    if math.isfinite(b):
        if not b > a:
            raise ValueError(f"empty or reversed domain ({a}, {b})")
        fwd = _identity_map
        t_lo, t_hi = a, b
    else:
        fwd = (_rational_map(a) if spec.infinite_transform == "rational"
               else _exponential_map(a))
        t_lo, t_hi = 0.0, 1.0

    if vectorized:
        def g(t):
            x, jac = fwd(t)
            return np.asarray(f(x), dtype=float) * jac, x
    else:
        def g(t):
            x, jac = fwd(t)
            fx = np.fromiter((f(xi) for xi in x), dtype=float, count=len(x))
            return fx * jac, x

    return g, t_lo, t_hi


def _panel(g, a, b):
    """Kronrod value, |K-G| error, plus the raw samples for error reporting."""
    mid = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fx, x = g(mid + h * _XK)
    bad = ~np.isfinite(fx)
    if bad.any():
        i = int(np.argmax(bad))
        raise IntegrandDomainError(float(x[i]), float(fx[i]))
    k = h * float(_WK @ fx)
    gv = h * float(_WG @ fx[_GAUSS_IDX])
    return k, abs(k - gv)


def integrate_1d(f, domain, spec: QuadratureSpec | None = None,
                 vectorized: bool = False) -> QuadResult:
    """Integrate ``f`` over ``domain = (a, b)``; ``b`` may be ``inf``.

    Parameters
    ----------
    f : callable
        Integrand.  With ``vectorized=True`` it must map an ndarray of
        abscissae to an ndarray of values; otherwise scalar to scalar.
    domain : tuple of float
        ``(a, b)`` with finite ``a``; semi-infinite when ``b == inf``.
    spec : QuadratureSpec
        Tolerances; defaults to ``QuadratureSpec()``.

    Returns
    -------
    QuadResult
        ``converged`` is False (never an exception) when the subdivision
        budget runs out before the tolerance is met.

    Raises
    ------
    IntegrandDomainError
        If the integrand returns NaN or infinity at an evaluation point;
        the offending abscissa is reported in original coordinates.
    """
    if spec is None:
        spec = QuadratureSpec()
    if float(domain[0]) == float(domain[1]):
        return QuadResult(0.0, 0.0, True, 0)
    g, lo, hi = _wrap(f, domain, spec, vectorized)

    val, err = _panel(g, lo, hi)
    evals = 15
    # heap of (-panel_error, tie, a, b, panel_value, panel_error)
    heap = [(-err, 0, lo, hi, val, err)]
    tie = 1
    subdivisions = 0
    total, total_err = val, err
    while total_err > spec.tolerance(total) and subdivisions < spec.max_subdivisions:
        _, _, a, b, v0, e0 = heapq.heappop(heap)
        m = 0.5 * (a + b)
        v1, e1 = _panel(g, a, m)
        v2, e2 = _panel(g, m, b)
        evals += 30
        subdivisions += 1
        total += v1 + v2 - v0
        total_err += e1 + e2 - e0
        heapq.heappush(heap, (-e1, tie, a, m, v1, e1))
        heapq.heappush(heap, (-e2, tie + 1, m, b, v2, e2))
        tie += 2
    # Re-sum panels to shed the accumulated increment rounding.
    total = math.fsum(p[4] for p in heap)
    total_err = math.fsum(p[5] for p in heap)
    return QuadResult(total, total_err, total_err <= spec.tolerance(total), evals)


def integrate_nested(f, domains, spec: QuadratureSpec | None = None,
                     vectorized: bool = False) -> QuadResult:
    """Tensor-nested integration of ``f(x0, ..., xk)``, outermost first.

    ``domains`` is an ordered list of 2 or 3 intervals, ``domains[0]`` the
    outermost.  With ``vectorized=True`` the innermost variable is passed as
    an ndarray (the outer ones stay scalar).  Error estimates of the inner
    levels are propagated by summation into the reported estimate, and
    ``evaluations`` counts calls of ``f`` itself.
    """
    if spec is None:
        spec = QuadratureSpec()
    ndim = len(domains)
    if ndim not in (2, 3):
        raise ValueError(f"integrate_nested supports 2 or 3 domains, got {ndim}")

    # Tolerance budget: half to the outermost rule and a tenth per inner
    # level, so the summed estimate still fits the caller's target.
    outer_spec = spec.scaled(0.5)
    inner_spec = spec.scaled(0.1)
    leaf_evals = 0
    all_converged = True
    # Per inner level, the worst absolute error and the largest magnitude
    # seen.  An individual inner integral may be arbitrarily small relative
    # to the level (tails, zero crossings), which makes its own relative
    # error meaningless; normalizing by the level maximum gives a scale-free
    # bound on what the inner errors can contribute to the outer value.  On
    # finite enclosing domains the measure-weighted absolute bound is also
    # valid, and the smaller of the two is used.
    inner_err = [0.0] * ndim
    inner_scale = [0.0] * ndim
    widths = [float(b) - float(a) for a, b in domains]

    def level(idx, prefix):
        nonlocal leaf_evals, all_converged
        last = idx == ndim - 1
        lvl_spec = outer_spec if idx == 0 else inner_spec
        if last:
            fn = (lambda x: f(*prefix, x))
            res = integrate_1d(fn, domains[idx], lvl_spec,
                               vectorized=vectorized)
            leaf_evals += res.evaluations
        else:
            res = integrate_1d(lambda x: level(idx + 1, prefix + (x,)),
                               domains[idx], lvl_spec)
        if idx > 0:
            inner_err[idx] = max(inner_err[idx], res.error_estimate)
            inner_scale[idx] = max(inner_scale[idx], abs(res.value))
            all_converged = all_converged and res.converged
            return res.value
        return res

    outer = level(0, ())
    err = outer.error_estimate
    for idx in range(1, ndim):
        contrib = (abs(outer.value) * inner_err[idx]
                   / max(inner_scale[idx], 1e-300))
        measure = math.prod(widths[:idx])
        if math.isfinite(measure):
            contrib = min(contrib, measure * inner_err[idx])
        err += contrib
    converged = (all_converged and outer.converged
                 and err <= spec.tolerance(outer.value))
    return QuadResult(outer.value, err, converged, leaf_evals)
