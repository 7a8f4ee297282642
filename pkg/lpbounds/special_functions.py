"""
Gamma function and the closed-form constants of the Lp-norm inequalities.

    C_alpha = (2/alpha) * Gamma(1/alpha) * (alpha*e)^(1/alpha)
    D_alpha = Gamma(alpha+1)^(1/alpha)
    C(n)    = (2*pi*e)^(n/2)
    D(n)    = (n^2 e^2 / (2*sqrt(2)*(n+2)))^(n/2),  n >= 2

All constants are evaluated in log space from ``scipy.special.gammaln`` so that
large alpha never overflows.
"""

import logging
import math
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field
from scipy import optimize, special

from lpbounds.errors import DomainError

logger = logging.getLogger(__name__)


class ConstantSet(BaseModel):
    """The one-dimensional constants for a moment order alpha."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    c_alpha: float = Field(gt=0)
    d_alpha: float = Field(gt=0)

    @property
    def in_theorem_range(self) -> bool:
        """The main inequalities are stated for alpha >= 1 only."""
        return self.alpha >= 1.0


class MultivariateConstantSet(BaseModel):
    """The constants C(n), D(n) of the multivariate inequality."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    c_n: float = Field(gt=0)
    d_n: float | None = Field(default=None, gt=0)


def _require_positive(name: str, x: float) -> float:
    value = float(x)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a positive finite number, got {x}")
    return value


def gamma_fn(x: float) -> float:
    """
    Gamma function for x > 0.

    Raises:
        DomainError: If x is not positive
    """
    x = _require_positive("x", x)
    return float(special.gamma(x))


def log_gamma_fn(x: float) -> float:
    """log Gamma(x) for x > 0."""
    x = _require_positive("x", x)
    return float(special.gammaln(x))


def log_c_alpha(alpha: float) -> float:
    alpha = _require_positive("alpha", alpha)
    return (
        math.log(2.0 / alpha)
        + float(special.gammaln(1.0 / alpha))
        + (math.log(alpha) + 1.0) / alpha
    )


def log_d_alpha(alpha: float) -> float:
    alpha = _require_positive("alpha", alpha)
    return float(special.gammaln(alpha + 1.0)) / alpha


def c_alpha(alpha: float) -> float:
    """
    C_alpha = (2/alpha) Gamma(1/alpha) (alpha e)^(1/alpha).

    Any alpha > 0 is accepted; callers flag alpha < 1 as outside the stated
    theorem range.

    Raises:
        DomainError: If alpha <= 0
    """
    return math.exp(log_c_alpha(alpha))


def d_alpha(alpha: float) -> float:
    """
    D_alpha = Gamma(alpha + 1)^(1/alpha).

    Raises:
        DomainError: If alpha <= 0
    """
    return math.exp(log_d_alpha(alpha))


def _require_dimension(n: int, minimum: int) -> int:
    if isinstance(n, bool) or int(n) != n or int(n) < minimum:
        raise DomainError(f"Dimension n must be an integer >= {minimum}, got {n}")
    return int(n)


def log_c_n(n: int) -> float:
    n = _require_dimension(n, 1)
    return 0.5 * n * math.log(2.0 * math.pi * math.e)


def log_d_n(n: int) -> float:
    n = _require_dimension(n, 2)
    return 0.5 * n * (2.0 * math.log(n) + 2.0 - math.log(2.0 * math.sqrt(2.0) * (n + 2)))


def c_n(n: int) -> float:
    """C(n) = (2 pi e)^(n/2) for n >= 1."""
    return math.exp(log_c_n(n))


def d_n(n: int) -> float:
    """
    D(n) = (n^2 e^2 / (2 sqrt(2) (n + 2)))^(n/2), defined for n >= 2.

    Raises:
        DomainError: If n < 2
    """
    return math.exp(log_d_n(n))


def constant_set(alpha: float) -> ConstantSet:
    """Build the :class:`ConstantSet` for ``alpha``."""
    return ConstantSet(alpha=float(alpha), c_alpha=c_alpha(alpha), d_alpha=d_alpha(alpha))


def multivariate_constant_set(n: int) -> MultivariateConstantSet:
    """Build the :class:`MultivariateConstantSet`; ``d_n`` is None for n = 1."""
    n = _require_dimension(n, 1)
    return MultivariateConstantSet(n=n, c_n=c_n(n), d_n=d_n(n) if n >= 2 else None)


def beta_objective(beta: float, alpha: float) -> float:
    """exp(beta) * beta^(-1/alpha)."""
    return math.exp(beta - math.log(beta) / alpha)


def numeric_beta_minimizer(alpha: float, upper: float = 10.0) -> float:
    """
    Minimize exp(beta) beta^(-1/alpha) numerically over beta in (0, upper].

    The log of the objective, beta - log(beta)/alpha, is strictly convex, so the
    minimizer is the unique root of its derivative 1 - 1/(alpha*beta) when that
    root lies inside the interval, and ``upper`` otherwise.
    """
    alpha = _require_positive("alpha", alpha)

    def slope(beta: float) -> float:
        return 1.0 - 1.0 / (alpha * beta)

    lower = 1e-12
    if slope(upper) <= 0:
        return upper
    return float(optimize.brentq(slope, lower, upper, xtol=1e-15, rtol=1e-15))


def beta_objective_min(alpha: float) -> Tuple[float, float]:
    """
    Closed-form minimizer of exp(beta) beta^(-1/alpha): beta* = 1/alpha.

    The closed form is cross-checked against :func:`numeric_beta_minimizer`
    whenever beta* lies in its search interval.

    Returns:
        Tuple of (beta_star, minimum value)
    """
    alpha = _require_positive("alpha", alpha)
    beta_star = 1.0 / alpha
    value = beta_objective(beta_star, alpha)
    if beta_star < 10.0:
        numeric = numeric_beta_minimizer(alpha)
        if abs(numeric - beta_star) > 1e-8:
            logger.warning(
                f"Numeric beta minimizer {numeric!r} disagrees with 1/alpha={beta_star!r}"
            )
    return beta_star, value
