"""Parameter containers shared across the analytic and simulation code.

Units are kilometres for distance, seconds for time, and natural-log units
(nats) for rate, so a cost parameter trades directly against the rate
integrals.  Validation is front-loaded here: every container checks its
fields on construction and error messages name the offending field and the
violated bound, which the CLI relies on for its exit-code contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "ParameterError",
    "NetworkParams",
    "SkippingPolicy",
    "SpeedLaw",
    "MovementPeriod",
]


class ParameterError(ValueError):
    """A parameter violated its documented bound."""


def _check(cond: bool, name: str, msg: str):
    if not cond:
        raise ParameterError(f"{name} {msg}")


@dataclass(frozen=True)
class NetworkParams:
    """Deployment density, path loss and noise of the cellular network.

    Attributes
    ----------
    lam : float
        Base station density (per km^2), > 0.
    beta : float
        Path loss exponent, > 2 (interference power must be summable).
    sigma2 : float
        Noise power, >= 0; zero gives the interference-limited regime.
    """

    lam: float
    beta: float
    sigma2: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        _check(self.lam > 0, "lam", f"must be > 0, got {self.lam}")
        _check(self.beta > 2, "beta", f"must be > 2, got {self.beta}")
        _check(self.sigma2 >= 0, "sigma2", f"must be >= 0, got {self.sigma2}")


@dataclass(frozen=True)
class SkippingPolicy:
    """Handover-skipping policy: commit to the serving cell for s seconds.

    Attributes
    ----------
    s : float
        Skipping interval in seconds, > 0.
    cost : float
        Rate-equivalent cost per executed handover (nat-seconds), >= 0.
    epsilon : float
        Decay rate of the serving-distance relaxation used by the refined
        rate model, >= 0.
    """

    s: float
    cost: float = 0.0
    epsilon: float = 10.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        _check(self.s > 0, "s", f"must be > 0, got {self.s}")
        _check(self.cost >= 0, "cost", f"must be >= 0, got {self.cost}")
        _check(self.epsilon >= 0, "epsilon", f"must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class SpeedLaw:
    """Distribution of the distance L travelled per skipping period.

    One of four families, selected by ``kind``:

    - ``deterministic``: point mass at ``l``.
    - ``exponential``: rate ``1/mean``.
    - ``erlang``: shape ``k`` (integer >= 1) with the given ``mean``.
    - ``hyper_exponential``: mixture p'*Exp(rate1) + (1-p')*Exp(rate2).
    """

    kind: str
    params: dict = field(default_factory=dict)

    _KINDS = ("deterministic", "exponential", "erlang", "hyper_exponential")

    def __post_init__(self):
        self.validate()

    # -- constructors ------------------------------------------------------

    @classmethod
    def deterministic(cls, l: float) -> "SpeedLaw":
        return cls("deterministic", {"l": float(l)})

    @classmethod
    def exponential(cls, mean: float) -> "SpeedLaw":
        return cls("exponential", {"mean": float(mean)})

    @classmethod
    def erlang(cls, k: int, mean: float) -> "SpeedLaw":
        _check(float(k).is_integer(), "k",
               f"must be an integer >= 1, got {k!r}")
        return cls("erlang", {"k": int(k), "mean": float(mean)})

    @classmethod
    def hyper_exponential(cls, p_prime: float, rate1: float,
                          rate2: float) -> "SpeedLaw":
        return cls("hyper_exponential", {
            "p_prime": float(p_prime), "rate1": float(rate1),
            "rate2": float(rate2),
        })

    @classmethod
    def hyper_exponential_balanced(cls, mean: float) -> "SpeedLaw":
        """Two-branch mixture with p' = 1/2 and rate1 = 3*rate2.

        Solving p'/rate1 + (1-p')/rate2 = mean gives rate2 = 2/(3*mean).
        """
        rate2 = 2.0 / (3.0 * float(mean))
        return cls.hyper_exponential(0.5, 3.0 * rate2, rate2)

    # -- contract ----------------------------------------------------------

    def validate(self):
        _check(self.kind in self._KINDS, "kind",
               f"must be one of {self._KINDS}, got {self.kind!r}")
        p = self.params
        if self.kind == "deterministic":
            _check("l" in p, "l", "is required for deterministic laws")
            _check(p["l"] >= 0, "l", f"must be >= 0, got {p['l']}")
        elif self.kind == "exponential":
            _check("mean" in p, "mean", "is required for exponential laws")
            _check(p["mean"] > 0, "mean", f"must be > 0, got {p['mean']}")
        elif self.kind == "erlang":
            _check("k" in p and "mean" in p, "k, mean",
                   "are required for erlang laws")
            _check(isinstance(p["k"], int) and p["k"] >= 1, "k",
                   f"must be an integer >= 1, got {p['k']!r}")
            _check(p["mean"] > 0, "mean", f"must be > 0, got {p['mean']}")
        else:
            _check(all(k in p for k in ("p_prime", "rate1", "rate2")),
                   "p_prime, rate1, rate2",
                   "are required for hyper_exponential laws")
            _check(0 < p["p_prime"] < 1, "p_prime",
                   f"must be strictly between 0 and 1, got {p['p_prime']}")
            _check(p["rate1"] > 0, "rate1", f"must be > 0, got {p['rate1']}")
            _check(p["rate2"] > 0, "rate2", f"must be > 0, got {p['rate2']}")

    def mean_displacement(self) -> float:
        p = self.params
        if self.kind == "deterministic":
            return p["l"]
        if self.kind == "exponential":
            return p["mean"]
        if self.kind == "erlang":
            return p["mean"]
        return p["p_prime"] / p["rate1"] + (1.0 - p["p_prime"]) / p["rate2"]

    def sample(self, n: int, rng) -> "np.ndarray":
        """Draw n displacements with the given numpy Generator."""
        import numpy as np

        p = self.params
        if self.kind == "deterministic":
            return np.full(n, p["l"])
        if self.kind == "exponential":
            return rng.exponential(p["mean"], size=n)
        if self.kind == "erlang":
            k = p["k"]
            return rng.gamma(k, p["mean"] / k, size=n)
        branch = rng.random(n) < p["p_prime"]
        rates = np.where(branch, p["rate1"], p["rate2"])
        return rng.exponential(1.0, size=n) / rates

    def quantile(self, q: float) -> float:
        """Inverse CDF, used to truncate averaging integrals."""
        from scipy import stats

        p = self.params
        if self.kind == "deterministic":
            return p["l"]
        if self.kind == "exponential":
            return stats.expon.ppf(q, scale=p["mean"])
        if self.kind == "erlang":
            return stats.gamma.ppf(q, p["k"], scale=p["mean"] / p["k"])
        # Mixture quantile by bisection on the CDF.
        lo, hi = 0.0, 1.0
        while self.cdf(hi) < q:
            hi *= 2.0
            if hi > 1e18:
                return hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < q:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def cdf(self, x: float) -> float:
        from scipy import stats

        p = self.params
        if self.kind == "deterministic":
            return 0.0 if x < p["l"] else 1.0
        if self.kind == "exponential":
            return stats.expon.cdf(x, scale=p["mean"])
        if self.kind == "erlang":
            return stats.gamma.cdf(x, p["k"], scale=p["mean"] / p["k"])
        return (p["p_prime"] * -math.expm1(-p["rate1"] * x)
                + (1.0 - p["p_prime"]) * -math.expm1(-p["rate2"] * x))

    def pdf(self, x) -> "np.ndarray":
        """Density at x (vectorized); the deterministic law has none."""
        import numpy as np
        from scipy import stats

        if self.kind == "deterministic":
            raise ParameterError(
                "kind deterministic has a point mass, not a density"
            )
        p = self.params
        x = np.asarray(x, dtype=float)
        if self.kind == "exponential":
            return stats.expon.pdf(x, scale=p["mean"])
        if self.kind == "erlang":
            return stats.gamma.pdf(x, p["k"], scale=p["mean"] / p["k"])
        return (p["p_prime"] * p["rate1"] * np.exp(-p["rate1"] * x)
                + (1.0 - p["p_prime"]) * p["rate2"] * np.exp(-p["rate2"] * x))


@dataclass(frozen=True)
class MovementPeriod:
    """One skipping period: distance l covered in s seconds at speed l/s.

    ``u`` is a position along the trajectory measured from the period start,
    so 0 <= u < l (or u = 0 for a degenerate stationary period).
    """

    l: float
    s: float
    u: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        _check(self.l >= 0, "l", f"must be >= 0, got {self.l}")
        _check(self.s > 0, "s", f"must be > 0, got {self.s}")
        if self.l > 0:
            _check(0 <= self.u < self.l, "u",
                   f"must be in [0, l={self.l}), got {self.u}")
        else:
            _check(self.u == 0, "u", f"must be 0 when l == 0, got {self.u}")

    @property
    def v(self) -> float:
        return self.l / self.s
