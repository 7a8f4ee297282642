"""
Functionals of one-dimensional densities.

``lp_norm``, ``mean``, ``sigma_alpha``, ``diff_entropy`` and ``renyi_entropy``
pick the most exact path available for the density at hand:

* catalog members use closed forms (``sigma_alpha`` only for alpha in {1, 2});
* piecewise log-linear densities use exact segment integrals (``sigma_alpha``
  only for alpha in {1, 2});
* everything else goes through adaptive quadrature.

Passing ``method=FunctionalMethod.ADAPTIVE`` forces the quadrature path, which
is how the exact paths are cross-checked.
"""

import logging
import math
import threading
from enum import Enum
from typing import Any, Callable, Dict, Hashable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from lpbounds.config import get_settings
from lpbounds.density import AnalyticDensity, PiecewiseLogLinearDensity
from lpbounds.errors import DomainError
from lpbounds.exponents import INF, Exponent, as_exponent, format_exponent, require_norm_exponent
from lpbounds.quadrature import (
    Interval,
    adaptive_integrate,
    adaptive_integrate_exp,
    log_local_mass,
    riemann_oracle,
)

logger = logging.getLogger(__name__)

_EXACT_REL_ERROR = 1e-15


class FunctionalKind(str, Enum):
    LP_NORM = "lp_norm"
    SIGMA_ALPHA = "sigma_alpha"
    DIFF_ENTROPY = "diff_entropy"
    RENYI_ENTROPY = "renyi_entropy"
    MEAN = "mean"
    RESTRICTED_LP_NORM = "restricted_lp_norm"


class FunctionalMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    EXACT_SEGMENT = "exact_segment"
    ADAPTIVE = "adaptive"

    @property
    def is_exact(self) -> bool:
        return self is not FunctionalMethod.ADAPTIVE


class FunctionalValue(BaseModel):
    """A computed scalar with the method that produced it and an error estimate."""

    model_config = ConfigDict(frozen=True)

    kind: FunctionalKind
    value: float
    error_estimate: float = Field(ge=0)
    method: FunctionalMethod
    parameter: Optional[str] = None

    def __float__(self) -> float:
        return self.value


def _exact_method(f: Any) -> Optional[FunctionalMethod]:
    if isinstance(f, AnalyticDensity):
        return FunctionalMethod.CLOSED_FORM
    if isinstance(f, PiecewiseLogLinearDensity):
        return FunctionalMethod.EXACT_SEGMENT
    return None


def _resolve_method(f: Any, method: Optional[FunctionalMethod]) -> FunctionalMethod:
    exact = _exact_method(f)
    if method is None:
        return exact or FunctionalMethod.ADAPTIVE
    method = FunctionalMethod(method)
    if method is not FunctionalMethod.ADAPTIVE and method is not exact:
        raise DomainError(f"Method {method.value} is not available for {type(f).__name__}")
    return method


def _split_points(f: Any, *extra: float) -> List[float]:
    lo, hi = f.support()
    pts = {float(x) for x in f.breakpoints()}
    pts.add(float(f.mode_and_supnorm()[0]))
    pts.update(float(x) for x in extra)
    return sorted(x for x in pts if lo < x < hi)


def _tail_rates(f: Any, factor: float = 1.0) -> Tuple[float, float]:
    left, right = f.tail_rates()
    return factor * left, factor * right


# ---------------------------------------------------------------------------
# L^p norms
# ---------------------------------------------------------------------------


def _adaptive_log_lp_integral(f: Any, p: float) -> Tuple[float, float]:
    """log int f^p and its absolute error (in log units) by quadrature."""
    log_sup = math.log(f.mode_and_supnorm()[1])
    log_scale = p * log_sup
    result = adaptive_integrate_exp(
        lambda x: p * float(f.log_density(x)),
        f.support(),
        log_scale,
        points=_split_points(f),
        tail_rates=_tail_rates(f, p),
    )
    if result.value <= 0:
        raise DomainError(f"int f^p evaluated to {result.value}; density looks degenerate")
    return math.log(result.value) + log_scale, result.abs_error_estimate / result.value


def log_lp_integral(
    f: Any, p: float, method: Optional[FunctionalMethod] = None
) -> Tuple[float, float, FunctionalMethod]:
    """
    log int f^p for finite p >= 1.

    Returns:
        Tuple of (log integral, absolute error of the log, method used)
    """
    method = _resolve_method(f, method)
    if method is FunctionalMethod.ADAPTIVE:
        value, err = _adaptive_log_lp_integral(f, p)
        return value, err, method
    value = f.log_lp_integral(p)
    return value, _EXACT_REL_ERROR * max(1.0, abs(value)), method


def lp_norm(
    f: Any, p: Exponent, method: Optional[FunctionalMethod] = None
) -> FunctionalValue:
    """
    ||f||_p for p in [1, inf].

    p = 1 returns exactly 1 and p = inf returns the sup-norm from the mode.
    Finite p computes (1/p) log int exp(p log f) and exponentiates once.

    Raises:
        DomainError: If p < 1
    """
    p = require_norm_exponent(p)
    label = format_exponent(p)
    if p is INF:
        sup = float(f.mode_and_supnorm()[1])
        resolved = _exact_method(f) or FunctionalMethod.ADAPTIVE
        return FunctionalValue(
            kind=FunctionalKind.LP_NORM,
            value=sup,
            error_estimate=_EXACT_REL_ERROR * sup if resolved.is_exact else 1e-10 * sup,
            method=resolved,
            parameter=label,
        )
    if p == 1.0:
        return FunctionalValue(
            kind=FunctionalKind.LP_NORM,
            value=1.0,
            error_estimate=0.0,
            method=_resolve_method(f, method),
            parameter=label,
        )
    log_int, log_err, resolved = log_lp_integral(f, p, method)
    value = math.exp(log_int / p)
    return FunctionalValue(
        kind=FunctionalKind.LP_NORM,
        value=value,
        error_estimate=value * log_err / p,
        method=resolved,
        parameter=label,
    )


def restricted_lp_norm(f: Any, p: Exponent, interval: Interval) -> FunctionalValue:
    """
    ||f||_{p, [a, b]} = (int_a^b f^p)^(1/p), or the supremum of f on [a, b].

    Raises:
        DomainError: If p < 1 or the interval is not a finite a < b
    """
    p = require_norm_exponent(p)
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError(f"Restricted norms need a finite interval a < b, got [{a}, {b}]")
    label = format_exponent(p)

    if p is INF:
        if f.is_log_concave:
            # A log-concave density restricted to [a, b] peaks at the clipped mode.
            x = min(max(f.mode_and_supnorm()[0], a), b)
            value = float(np.exp(f.log_density(x)))
            method = _exact_method(f) or FunctionalMethod.ADAPTIVE
        else:
            xs = np.linspace(a, b, 20001)
            value = float(np.max(np.exp(f.log_density(xs))))
            method = FunctionalMethod.ADAPTIVE
        return FunctionalValue(
            kind=FunctionalKind.RESTRICTED_LP_NORM,
            value=value,
            error_estimate=_EXACT_REL_ERROR * value,
            method=method,
            parameter=label,
        )

    p = float(p)
    if isinstance(f, PiecewiseLogLinearDensity):
        terms = [
            p * piece.log_anchor + log_local_mass(p * piece.slope, piece.length)
            for piece in f.pieces(a, b)
        ]
        log_int = float(np.logaddexp.reduce(terms))
        value = math.exp(log_int / p)
        return FunctionalValue(
            kind=FunctionalKind.RESTRICTED_LP_NORM,
            value=value,
            error_estimate=_EXACT_REL_ERROR * value,
            method=FunctionalMethod.EXACT_SEGMENT,
            parameter=label,
        )

    lo, hi = f.support()
    a_eff, b_eff = max(a, lo), min(b, hi)
    if not a_eff < b_eff:
        return FunctionalValue(
            kind=FunctionalKind.RESTRICTED_LP_NORM,
            value=0.0,
            error_estimate=0.0,
            method=FunctionalMethod.ADAPTIVE,
            parameter=label,
        )
    result = adaptive_integrate(
        lambda x: float(np.exp(p * f.log_density(x))),
        (a_eff, b_eff),
        points=_split_points(f),
    )
    integral = max(result.value, 0.0)
    value = integral ** (1.0 / p)
    err = value * result.abs_error_estimate / (p * integral) if integral > 0 else 0.0
    return FunctionalValue(
        kind=FunctionalKind.RESTRICTED_LP_NORM,
        value=value,
        error_estimate=err,
        method=FunctionalMethod.ADAPTIVE,
        parameter=label,
    )


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def _adaptive_moment(f: Any, g: Callable[[float], float], *extra: float) -> Tuple[float, float]:
    def integrand(x: float) -> float:
        log_fx = float(f.log_density(x))
        if log_fx == -math.inf:
            return 0.0
        return g(x) * math.exp(log_fx)

    result = adaptive_integrate(integrand, f.support(), points=_split_points(f, *extra))
    return result.value, result.abs_error_estimate


def mean(f: Any, method: Optional[FunctionalMethod] = None) -> FunctionalValue:
    """E[X]."""
    method = _resolve_method(f, method)
    if method is FunctionalMethod.ADAPTIVE:
        value, err = _adaptive_moment(f, lambda x: x)
    else:
        value = float(f.mean())
        err = _EXACT_REL_ERROR * max(1.0, abs(value))
    return FunctionalValue(kind=FunctionalKind.MEAN, value=value, error_estimate=err, method=method)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be a positive finite number, got {alpha}")
    if alpha < 1.0:
        logger.warning(f"alpha={alpha} is outside the stated theorem range alpha >= 1")
    return alpha


def sigma_alpha(
    f: Any, alpha: float, method: Optional[FunctionalMethod] = None
) -> FunctionalValue:
    """
    sigma_alpha = E[|X - E[X]|^alpha]^(1/alpha).

    Exact for alpha in {1, 2} on catalog and piecewise log-linear densities;
    otherwise adaptive quadrature split at the mean.

    Raises:
        DomainError: If alpha <= 0
        NonConvergenceError: Propagated from quadrature
    """
    alpha = _check_alpha(alpha)
    label = repr(alpha)
    exact = _exact_method(f)
    if method is None and exact is not None and alpha in (1.0, 2.0):
        method = exact
    method = FunctionalMethod.ADAPTIVE if method is None else _resolve_method(f, method)

    if method is FunctionalMethod.CLOSED_FORM:
        value = f.sigma_closed_form(alpha)
        if value is None:
            raise DomainError(f"No closed form for sigma_alpha at alpha={alpha}")
        err = _EXACT_REL_ERROR * value
    elif method is FunctionalMethod.EXACT_SEGMENT:
        if alpha == 2.0:
            value = math.sqrt(f.central_moment2())
        elif alpha == 1.0:
            value = f.central_abs_moment1()
        else:
            raise DomainError(f"No exact segment formula for sigma_alpha at alpha={alpha}")
        err = _EXACT_REL_ERROR * value
    else:
        m = float(mean(f).value)
        moment, moment_err = _adaptive_moment(f, lambda x: abs(x - m) ** alpha, m)
        value = moment ** (1.0 / alpha)
        err = value * moment_err / (alpha * moment) if moment > 0 else 0.0
    return FunctionalValue(
        kind=FunctionalKind.SIGMA_ALPHA,
        value=value,
        error_estimate=err,
        method=method,
        parameter=label,
    )


# ---------------------------------------------------------------------------
# Entropies
# ---------------------------------------------------------------------------


def diff_entropy(f: Any, method: Optional[FunctionalMethod] = None) -> FunctionalValue:
    """h(X) = -int f log f (natural log)."""
    method = _resolve_method(f, method)
    if method is FunctionalMethod.ADAPTIVE:

        def integrand(x: float) -> float:
            log_fx = float(f.log_density(x))
            if log_fx == -math.inf:
                return 0.0
            return -log_fx * math.exp(log_fx)

        result = adaptive_integrate(integrand, f.support(), points=_split_points(f))
        value, err = result.value, result.abs_error_estimate
    else:
        value = float(f.entropy())
        err = _EXACT_REL_ERROR * max(1.0, abs(value))
    return FunctionalValue(
        kind=FunctionalKind.DIFF_ENTROPY, value=value, error_estimate=err, method=method
    )


def renyi_entropy(
    f: Any, p: Exponent, method: Optional[FunctionalMethod] = None
) -> FunctionalValue:
    """
    h_p(X) = (p / (1 - p)) log ||f||_p for p in (1, inf].

    p = inf gives -log ||f||_inf.

    Raises:
        DomainError: If p <= 1 (p = 1 is :func:`diff_entropy`)
    """
    p = as_exponent(p)
    if p is not INF and float(p) <= 1.0:
        raise DomainError(
            f"Renyi entropy is computed for p > 1 only, got p={p}; use diff_entropy at p = 1"
        )
    label = format_exponent(p)
    if p is INF:
        norm = lp_norm(f, INF, method)
        value = -math.log(norm.value)
        err = norm.error_estimate / norm.value
        resolved = norm.method
    else:
        p = float(p)
        log_int, log_err, resolved = log_lp_integral(f, p, method)
        value = log_int / (1.0 - p)
        err = log_err / (p - 1.0)
    return FunctionalValue(
        kind=FunctionalKind.RENYI_ENTROPY,
        value=value,
        error_estimate=err,
        method=resolved,
        parameter=label,
    )


# ---------------------------------------------------------------------------
# Independent oracle values
# ---------------------------------------------------------------------------


def _oracle_domain(f: Any) -> Interval:
    return f.support()


def oracle_lp_norm(f: Any, p: float, n_points: Optional[int] = None) -> float:
    """||f||_p for finite p by the midpoint oracle."""
    n = n_points or get_settings().riemann_points
    integral = riemann_oracle(
        lambda x: np.exp(p * np.asarray(f.log_density(x))),
        _oracle_domain(f),
        n,
        points=_split_points(f),
    )
    return float(integral ** (1.0 / p))


def oracle_sigma_alpha(f: Any, alpha: float, n_points: Optional[int] = None) -> float:
    n = n_points or get_settings().riemann_points
    domain = _oracle_domain(f)
    pts = _split_points(f)
    m = riemann_oracle(lambda x: x * np.exp(np.asarray(f.log_density(x))), domain, n, points=pts)
    moment = riemann_oracle(
        lambda x: np.abs(x - m) ** alpha * np.exp(np.asarray(f.log_density(x))),
        domain,
        n,
        points=[*pts, m],
    )
    return float(moment ** (1.0 / alpha))


def oracle_diff_entropy(f: Any, n_points: Optional[int] = None) -> float:
    n = n_points or get_settings().riemann_points

    def integrand(x: np.ndarray) -> np.ndarray:
        log_fx = np.asarray(f.log_density(x), dtype=float)
        safe = np.where(np.isfinite(log_fx), log_fx, 0.0)
        return np.where(np.isfinite(log_fx), -safe * np.exp(safe), 0.0)

    return float(riemann_oracle(integrand, _oracle_domain(f), n, points=_split_points(f)))


# ---------------------------------------------------------------------------
# Memoized per-density view
# ---------------------------------------------------------------------------


class DensityProfile:
    """
    Memoizing view of one density's functionals.

    All checkers of a sweep task share one profile, so each functional is
    computed once per density. The cache is guarded by a lock and may be read
    and written from several threads.
    """

    def __init__(self, density: Any) -> None:
        self.density = density
        self._cache: Dict[Hashable, Any] = {}
        self._lock = threading.Lock()

    def _memo(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    def lp_norm(self, p: Exponent) -> FunctionalValue:
        p = require_norm_exponent(p)
        return self._memo(("lp", p), lambda: lp_norm(self.density, p))

    def supnorm(self) -> FunctionalValue:
        return self.lp_norm(INF)

    def mean(self) -> FunctionalValue:
        return self._memo(("mean",), lambda: mean(self.density))

    def sigma_alpha(self, alpha: float) -> FunctionalValue:
        return self._memo(("sigma", float(alpha)), lambda: sigma_alpha(self.density, alpha))

    def diff_entropy(self) -> FunctionalValue:
        return self._memo(("entropy",), lambda: diff_entropy(self.density))

    def renyi_entropy(self, p: Exponent) -> FunctionalValue:
        p = as_exponent(p)
        return self._memo(("renyi", p), lambda: renyi_entropy(self.density, p))

    def restricted_lp_norm(self, p: Exponent, interval: Interval) -> FunctionalValue:
        p = require_norm_exponent(p)
        key = ("restricted", p, float(interval[0]), float(interval[1]))
        return self._memo(key, lambda: restricted_lp_norm(self.density, p, interval))

    def mode_and_supnorm(self) -> Tuple[float, float]:
        return self._memo(("mode",), self.density.mode_and_supnorm)

    @property
    def symmetric(self) -> bool:
        return bool(getattr(self.density, "symmetric", False))

    def cached_keys(self) -> List[Hashable]:
        with self._lock:
            return list(self._cache)


def as_profile(f: Any) -> DensityProfile:
    """Wrap a density in a fresh :class:`DensityProfile` unless it already is one."""
    if isinstance(f, DensityProfile):
        return f
    return DensityProfile(f)
