"""Optimal skipping time: numeric maximization of the relaxed objective.

The relaxation q_tilde(s) typically rises to an interior maximum (skipping
longer amortizes handover cost) and then decays toward zero (stale rates
dominate), but for small path-loss exponents or high cost no interior
maximum exists and the policy question has no finite answer.  Existence is
decided on a log-spaced grid: a point qualifies only if it beats both
neighbors by more than the accumulated quadrature error, which keeps flat
tails and noise-level wiggles from minting fake optima.  The closed form is
the small-speed limit: quadratic Taylor of the offset average around s = 0
plus the leading handover-probability slope, maximized analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .datarate import _sinr_threshold, k_factor
from .evaluation import _q_tilde_result
from .params import NetworkParams, ParameterError
from .quadrature import ConvergenceError, QuadratureSpec, integrate_1d

__all__ = [
    "SearchConfig",
    "OptResult",
    "optimal_skipping_time_numeric",
    "optimal_skipping_time_closed",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchConfig:
    s_min: float = 1.0
    s_max: float = 2000.0
    grid_points: int = 200
    refine_tol: float = 0.01

    def __post_init__(self):
        if not self.s_min > 0:
            raise ParameterError(f"s_min must be > 0, got {self.s_min}")
        if not self.s_min < self.s_max:
            raise ParameterError(
                f"s_min must be < s_max, got [{self.s_min}, {self.s_max}]")
        if not self.grid_points >= 3:
            raise ParameterError(
                f"grid_points must be >= 3, got {self.grid_points}")
        if not self.refine_tol > 0:
            raise ParameterError(
                f"refine_tol must be > 0, got {self.refine_tol}")


@dataclass(frozen=True)
class OptResult:
    """Located maximum, or the explicit absence of one.

    ``s_star`` is populated only for an interior maximum strictly inside
    the search bounds; a best value on the boundary is reported as absent
    with ``is_interior`` False.
    """

    s_star: float | None
    q_at_star: float | None
    is_interior: bool


def optimal_skipping_time_numeric(v: float, net: NetworkParams, cost: float,
                                  search: SearchConfig | None = None,
                                  spec: QuadratureSpec | None = None
                                  ) -> OptResult:
    """Maximize q_tilde over s by grid scan plus golden-section refinement.

    A grid point is a candidate only if its value exceeds both neighbors by
    more than the summed error estimates of the three evaluations; the best
    candidate's bracket is then refined to ``refine_tol``.  Returns an
    absent result when no grid point qualifies.
    """
    if not v > 0:
        raise ParameterError(f"v must be > 0, got {v}")
    if not cost >= 0:
        raise ParameterError(f"cost must be >= 0, got {cost}")
    net.validate()
    if net.sigma2 != 0:
        raise ParameterError(
            f"sigma2 must be 0 for the relaxed objective, got {net.sigma2}")
    if search is None:
        search = SearchConfig()
    if spec is None:
        spec = QuadratureSpec()

    grid = np.geomspace(search.s_min, search.s_max, search.grid_points)
    vals = np.empty(search.grid_points)
    errs = np.empty(search.grid_points)
    for i, s in enumerate(grid):
        vals[i], errs[i] = _q_tilde_result(float(s), v, net, cost, spec)

    best = None
    for i in range(1, search.grid_points - 1):
        if (vals[i] > vals[i - 1] + errs[i] + errs[i - 1]
                and vals[i] > vals[i + 1] + errs[i] + errs[i + 1]):
            if best is None or vals[i] > vals[best]:
                best = i
    if best is None:
        return OptResult(None, None, False)

    lo, hi = grid[best - 1], grid[best + 1]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, _ = _q_tilde_result(float(x1), v, net, cost, spec)
    f2, _ = _q_tilde_result(float(x2), v, net, cost, spec)
    while hi - lo > search.refine_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2, _ = _q_tilde_result(float(x2), v, net, cost, spec)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1, _ = _q_tilde_result(float(x1), v, net, cost, spec)
    s_star, q_star = (x1, f1) if f1 >= f2 else (x2, f2)
    return OptResult(float(s_star), float(q_star), True)


@lru_cache(maxsize=256)
def _closed_form_scale(beta: float, spec: QuadratureSpec) -> float:
    def integrand(zeta):
        k = k_factor(_sinr_threshold(zeta), beta)
        r = 1.0 / (1.0 + k)
        return k * r * r

    res = integrate_1d(integrand, (0.0, math.inf), spec, vectorized=True)
    if not res.converged:
        raise ConvergenceError("small-speed curvature integral", res)
    return (15.0 - math.pi ** 2) / (4.0 * math.pi ** 2) / res.value


def optimal_skipping_time_closed(beta: float, cost: float,
                                 spec: QuadratureSpec | None = None) -> float:
    """Small-speed closed form of the optimal skipping time.

    Equals cost times a beta-only factor, so it is exactly linear in cost
    and independent of both the speed and the density.
    """
    if not beta > 2:
        raise ParameterError(f"beta must be > 2, got {beta}")
    if not cost >= 0:
        raise ParameterError(f"cost must be >= 0, got {cost}")
    if spec is None:
        spec = QuadratureSpec()
    return cost * _closed_form_scale(beta, spec)
