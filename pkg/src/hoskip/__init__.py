"""Time-based handover skipping in Poisson cellular networks.

Analytic handover rates and downlink data rates for a user that commits to
its serving base station for fixed skipping periods, the per-period
evaluation functions trading rate against handover cost, the optimal
skipping time (numeric and closed form), and a Monte Carlo simulator that
cross-validates every analytic quantity.
"""

from .backends import BACKEND_NAME
from .datarate import (BudgetExceededError, REDUCED_ACCURACY, RateQuery,
                       fit_epsilon, k_factor, tau1, tau2_approx, tau2_exact,
                       tau2_refined)
from .evaluation import EvaluationQuery, d1, d2, q1, q2, q_tilde
from .handover import (ChordGeometry, chord_distance, excess_area,
                       expected_handovers_nonskip, handover_probability_skip)
from .montecarlo import (Deployment, Estimate, McConfig, estimate_n1,
                         estimate_n2, estimate_q2, sample_ppp, sample_xi2)
from .optimizer import (OptResult, SearchConfig, optimal_skipping_time_closed,
                        optimal_skipping_time_numeric)
from .params import (MovementPeriod, NetworkParams, ParameterError,
                     SkippingPolicy, SpeedLaw)
from .quadrature import (ConvergenceError, IntegrandDomainError, QuadResult,
                         QuadratureSpec, integrate_1d, integrate_nested)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "BudgetExceededError",
    "ChordGeometry",
    "ConvergenceError",
    "Deployment",
    "Estimate",
    "EvaluationQuery",
    "IntegrandDomainError",
    "McConfig",
    "MovementPeriod",
    "NetworkParams",
    "OptResult",
    "ParameterError",
    "QuadResult",
    "QuadratureSpec",
    "RateQuery",
    "REDUCED_ACCURACY",
    "SearchConfig",
    "SkippingPolicy",
    "SpeedLaw",
    "chord_distance",
    "d1",
    "d2",
    "estimate_n1",
    "estimate_n2",
    "estimate_q2",
    "excess_area",
    "expected_handovers_nonskip",
    "fit_epsilon",
    "handover_probability_skip",
    "integrate_1d",
    "integrate_nested",
    "k_factor",
    "optimal_skipping_time_closed",
    "optimal_skipping_time_numeric",
    "q1",
    "q2",
    "q_tilde",
    "sample_ppp",
    "sample_xi2",
    "tau1",
    "tau2_approx",
    "tau2_exact",
    "tau2_refined",
]
