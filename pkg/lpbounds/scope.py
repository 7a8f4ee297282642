"""
Non-log-concave fixtures.

Gaussian mixtures are the only densities in the package that are not
log-concave. They exist to exercise the claims whose hypotheses ask only for a
finite moment (the moment/norm lower bounds in one and several dimensions) and
to record how the log-concave-only claims behave outside their scope. They are
not reachable from density spec files.
"""

import hashlib
import json
import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy import optimize, stats
from scipy.special import logsumexp

from lpbounds.errors import DomainError


class GaussianMixture:
    """
    Finite mixture of normal densities.

    Args:
        weights: Positive mixture weights (renormalized to sum 1)
        means: Component means
        sigmas: Component standard deviations, all > 0
    """

    is_log_concave = False
    symmetric = False
    center = None

    def __init__(
        self, weights: Sequence[float], means: Sequence[float], sigmas: Sequence[float]
    ) -> None:
        w = np.asarray(weights, dtype=float)
        mu = np.asarray(means, dtype=float)
        sd = np.asarray(sigmas, dtype=float)
        if not (w.shape == mu.shape == sd.shape and w.ndim == 1 and w.size >= 1):
            raise DomainError("weights, means and sigmas must be 1-D arrays of equal length")
        if np.any(w <= 0) or np.any(sd <= 0):
            raise DomainError("Mixture weights and sigmas must be positive")
        self.weights = w / w.sum()
        self.means = mu
        self.sigmas = sd
        self._log_weights = np.log(self.weights)
        self._mode: Tuple[float, float] | None = None

    def log_density(self, x: Any) -> Any:
        xs = np.asarray(x, dtype=float)
        comps = stats.norm.logpdf(xs[..., None], self.means, self.sigmas) + self._log_weights
        out = logsumexp(comps, axis=-1)
        if np.ndim(out) == 0:
            return float(out)
        return out

    def pdf(self, x: Any) -> Any:
        return np.exp(self.log_density(x))

    def support(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(float(m) for m in self.means)

    def tail_rates(self) -> Tuple[float, float]:
        rate = 1.0 / float(np.max(self.sigmas))
        return rate, rate

    def mode_and_supnorm(self) -> Tuple[float, float]:
        """Global maximum: best local maximum started from every component mean."""
        if self._mode is None:
            best_x, best_v = 0.0, -math.inf
            for m in self.means:
                res = optimize.minimize_scalar(
                    lambda x: -self.log_density(x),
                    bracket=(m - float(np.min(self.sigmas)), m + float(np.min(self.sigmas))),
                    method="brent",
                    options={"xtol": 1e-12},
                )
                if -res.fun > best_v:
                    best_x, best_v = float(res.x), float(-res.fun)
            self._mode = (best_x, math.exp(best_v))
        return self._mode

    def mean(self) -> float:
        return float(np.dot(self.weights, self.means))

    def variance(self) -> float:
        m = self.mean()
        return float(np.dot(self.weights, self.sigmas**2 + (self.means - m) ** 2))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        idx = rng.choice(self.weights.size, size=size, p=self.weights)
        return self.means[idx] + self.sigmas[idx] * rng.standard_normal(size)

    def to_spec(self) -> Dict[str, Any]:
        return {
            "mixture": {
                "weights": self.weights.tolist(),
                "means": self.means.tolist(),
                "sigmas": self.sigmas.tolist(),
            }
        }

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_spec(), sort_keys=True).encode()).hexdigest()[:12]

    def describe(self) -> str:
        return f"mixture{self.weights.size}"


def bimodal_mixture(separation: float = 3.0) -> GaussianMixture:
    """0.5 N(-s, 1) + 0.5 N(s, 1)."""
    return GaussianMixture([0.5, 0.5], [-separation, separation], [1.0, 1.0])


def scope_fixtures() -> List[GaussianMixture]:
    """The 1-D fixtures used by the scope checks."""
    return [
        bimodal_mixture(3.0),
        bimodal_mixture(1.5),
        GaussianMixture([0.7, 0.3], [0.0, 5.0], [0.5, 2.0]),
        GaussianMixture([0.2, 0.6, 0.2], [-4.0, 0.0, 4.0], [0.3, 1.0, 0.3]),
        spike_mixture(),
    ]


def spike_mixture() -> GaussianMixture:
    """A narrow spike far from a wide bump: ||f||_inf * sigma is far above Gamma(3)^(1/2)."""
    return GaussianMixture([0.5, 0.5], [0.0, 10.0], [0.01, 1.0])


def mixture_product(n: int, separation: float = 2.0) -> Any:
    """Product of ``n`` bimodal mixtures, a non-log-concave density on R^n."""
    from lpbounds.multivariate import MultivariateDensity

    return MultivariateDensity.product([bimodal_mixture(separation)] * n)
