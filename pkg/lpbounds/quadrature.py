"""
Integration routines.

Three independent paths are provided:

* exact integrals of exp(a + b x) (and its first moments) over a segment,
  evaluated in log space, used by the piecewise log-linear densities;
* :func:`adaptive_integrate`, a thin layer over QUADPACK (``scipy.integrate.quad``)
  that splits the domain at known kinks and maps infinite pieces to bounded ones;
* :func:`riemann_oracle`, a composite midpoint rule with its own domain
  clipping. It shares no code with the adaptive path.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from lpbounds.config import get_settings
from lpbounds.errors import DomainError, NonConvergenceError

logger = logging.getLogger(__name__)

Integrand = Callable[[float], float]
Interval = Tuple[float, float]


class IntegrationMethod(str, Enum):
    """How an integral was obtained."""

    EXACT_SEGMENT = "exact_segment"
    ADAPTIVE = "adaptive"
    RIEMANN_ORACLE = "riemann_oracle"


@dataclass(frozen=True)
class IntegralResult:
    """Value of an integral with its error estimate."""

    value: float
    abs_error_estimate: float
    method: IntegrationMethod
    subdivisions: int = 0

    def __post_init__(self) -> None:
        if self.abs_error_estimate < 0:
            raise ValueError("abs_error_estimate must be non-negative")


# ---------------------------------------------------------------------------
# Exact segment integrals
# ---------------------------------------------------------------------------

_SERIES_RADIUS = 2.0
_SERIES_TERMS = 40


def _phi(k: int, z: float) -> float:
    """int_0^1 t^k exp(z t) dt for z <= 0 and k in {0, 1, 2}."""
    if abs(z) < _SERIES_RADIUS:
        total = 0.0
        term = 1.0  # z^j / j!
        for j in range(_SERIES_TERMS):
            total += term / (j + k + 1)
            term *= z / (j + 1)
        return total
    ez = math.exp(z)
    if k == 0:
        return -math.expm1(z) / -z
    if k == 1:
        return (ez * (z - 1.0) + 1.0) / (z * z)
    return (ez * (z * z - 2.0 * z + 2.0) - 2.0) / (z * z * z)


def _log_phi0(z: float) -> float:
    """log int_0^1 exp(z t) dt for z <= 0."""
    if z == 0.0:
        return 0.0
    if z > -1e-8:
        return z / 2.0
    return math.log(-math.expm1(z)) - math.log(-z)


def local_moments(slope: float, length: float) -> Tuple[float, float, float]:
    """
    Moments J_k = int_0^L u^k exp(slope * u) du for k = 0, 1, 2.

    Requires ``slope <= 0``; ``length`` may be ``inf`` when ``slope < 0``.
    """
    if slope > 0:
        raise DomainError(f"local_moments expects a non-positive slope, got {slope}")
    if math.isinf(length):
        if slope >= 0:
            raise DomainError("An infinite segment needs a strictly negative slope")
        r = -slope
        return 1.0 / r, 1.0 / (r * r), 2.0 / (r * r * r)
    z = slope * length
    return (
        length * _phi(0, z),
        length * length * _phi(1, z),
        length * length * length * _phi(2, z),
    )


def log_local_mass(slope: float, length: float) -> float:
    """log of int_0^L exp(slope * u) du for slope <= 0."""
    if math.isinf(length):
        if slope >= 0:
            raise DomainError("An infinite segment needs a strictly negative slope")
        return -math.log(-slope)
    if length <= 0:
        return -math.inf
    return math.log(length) + _log_phi0(slope * length)


def _check_exp_affine_domain(b: float, x0: float, x1: float) -> None:
    if not x0 <= x1:
        raise DomainError(f"Segment must satisfy x0 <= x1, got [{x0}, {x1}]")
    if math.isinf(x1) and x1 > 0 and not b < 0:
        raise DomainError(f"int exp(a + b x) to +inf diverges for b = {b} >= 0")
    if math.isinf(x0) and x0 < 0 and not b > 0:
        raise DomainError(f"int exp(a + b x) from -inf diverges for b = {b} <= 0")


def log_exp_affine_integral(a: float, b: float, x0: float, x1: float) -> float:
    """
    log of int_{x0}^{x1} exp(a + b x) dx, computed without overflow.

    The segment is re-anchored at the endpoint where the integrand is largest,
    so every exponential evaluated is at most 1.

    Raises:
        DomainError: For a divergent configuration (tail with the wrong slope sign)
    """
    _check_exp_affine_domain(b, x0, x1)
    if x0 == x1:
        return -math.inf
    if b > 0:
        return a + b * x1 + log_local_mass(-b, x1 - x0)
    if b < 0:
        return a + b * x0 + log_local_mass(b, x1 - x0)
    return a + math.log(x1 - x0)


def exact_exp_affine_integral(a: float, b: float, x0: float, x1: float) -> float:
    """
    int_{x0}^{x1} exp(a + b x) dx in closed form.

    Equals (exp(a + b x1) - exp(a + b x0)) / b for b != 0 and (x1 - x0) exp(a)
    for b == 0; infinite endpoints are allowed when the tail decays.

    Raises:
        DomainError: For a divergent configuration
    """
    return math.exp(log_exp_affine_integral(a, b, x0, x1))


# ---------------------------------------------------------------------------
# Adaptive quadrature
# ---------------------------------------------------------------------------


def _pieces(domain: Interval, points: Sequence[float]) -> List[Interval]:
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise DomainError(f"Integration domain must satisfy lo < hi, got [{lo}, {hi}]")
    inner = sorted({float(p) for p in points if lo < float(p) < hi and math.isfinite(p)})
    edges = [lo, *inner, hi]
    return list(zip(edges[:-1], edges[1:]))


def adaptive_integrate(
    g: Integrand,
    domain: Interval,
    rel_tol: Optional[float] = None,
    abs_tol: Optional[float] = None,
    points: Sequence[float] = (),
    limit: Optional[int] = None,
) -> IntegralResult:
    """
    Adaptive Gauss-Kronrod integration of ``g`` over ``domain``.

    The domain is split at ``points`` (kinks of the integrand). Finite pieces use
    QAGS; half-infinite and infinite pieces use QAGI, which maps the piece onto
    (0, 1] by the monotone change of variables x = a + (1 - t)/t.

    Args:
        g: Integrand, finite on the domain
        domain: (lo, hi), either end may be infinite
        rel_tol: Relative tolerance (defaults to settings.rel_tol)
        abs_tol: Absolute tolerance (defaults to settings.abs_tol)
        points: Break points inside the domain
        limit: Subdivision budget per piece (defaults to settings.max_subdivisions)

    Returns:
        IntegralResult with method ``adaptive``

    Raises:
        NonConvergenceError: If any piece fails to converge within the budget;
            the error carries the best estimate
    """
    cfg = get_settings()
    rel_tol = cfg.rel_tol if rel_tol is None else rel_tol
    abs_tol = cfg.abs_tol if abs_tol is None else abs_tol
    limit = cfg.max_subdivisions if limit is None else limit
    if rel_tol <= 0 or abs_tol <= 0:
        raise DomainError("Integration tolerances must be positive")

    pieces = _pieces(domain, points)
    # Split the absolute budget across pieces so the total meets abs_tol.
    piece_abs = abs_tol / len(pieces)
    total = 0.0
    error = 0.0
    subdivisions = 0
    failures: List[str] = []
    for lo, hi in pieces:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            out = integrate.quad(
                g, lo, hi, epsabs=piece_abs, epsrel=rel_tol, limit=limit, full_output=1
            )
        value, abserr, info = out[0], out[1], out[2]
        total += value
        error += abserr
        subdivisions += int(info.get("last", 0))
        if len(out) > 3:
            failures.append(f"[{lo}, {hi}]: {out[3].splitlines()[0].strip()}")
        if not math.isfinite(value):
            failures.append(f"[{lo}, {hi}]: non-finite value {value}")

    if failures:
        logger.debug(f"adaptive_integrate failed on {len(failures)} piece(s): {failures}")
        raise NonConvergenceError(
            "Adaptive quadrature did not converge: " + "; ".join(failures),
            best_estimate=total,
            abs_error_estimate=error,
        )
    return IntegralResult(
        value=total,
        abs_error_estimate=error,
        method=IntegrationMethod.ADAPTIVE,
        subdivisions=subdivisions,
    )


def adaptive_integrate_exp(
    log_g: Integrand,
    domain: Interval,
    log_scale: float,
    points: Sequence[float] = (),
    rel_tol: Optional[float] = None,
    abs_tol: Optional[float] = None,
    tail_rates: Tuple[float, float] = (1.0, 1.0),
) -> IntegralResult:
    """
    Integrate exp(log_g) where ``log_g <= log_scale`` (up to rounding).

    The integrand is evaluated as exp(log_g - log_scale) and set to zero where
    that exponent drops below ``settings.log_underflow``. The mass discarded that
    way is bounded by exp(log_underflow) times the width of the finite part plus
    1/rate for each infinite tail, and added to the error estimate.

    Returns:
        IntegralResult for int exp(log_g - log_scale); multiply by
        exp(log_scale) to undo the shift.
    """
    floor = get_settings().log_underflow

    def shifted(x: float) -> float:
        s = log_g(x) - log_scale
        if s < floor:
            return 0.0
        return math.exp(s)

    result = adaptive_integrate(shifted, domain, rel_tol=rel_tol, abs_tol=abs_tol, points=points)
    lo, hi = domain
    width = 0.0 if math.isinf(lo) or math.isinf(hi) else hi - lo
    bound = math.exp(floor) * (
        width
        + (1.0 / tail_rates[0] if math.isinf(lo) else 0.0)
        + (1.0 / tail_rates[1] if math.isinf(hi) else 0.0)
    )
    return IntegralResult(
        value=result.value,
        abs_error_estimate=result.abs_error_estimate + bound,
        method=result.method,
        subdivisions=result.subdivisions,
    )


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

_ORACLE_MIN_POINTS = 1000
_ORACLE_TAIL_THRESHOLD = 1e-18
_ORACLE_OFFSETS = 2.0 ** np.arange(-2, 12)


def _oracle_anchor(
    g: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, points: Sequence[float]
) -> Tuple[float, float]:
    """Where |g| is largest on a doubling grid around the candidate points, and its value."""
    candidates = [float(p) for p in points if lo <= float(p) <= hi]
    candidates += [end for end in (lo, hi) if math.isfinite(end)]
    if lo <= 0.0 <= hi or not candidates:
        candidates.append(0.0)
    centers = np.asarray(candidates, dtype=float)
    steps = np.concatenate([[0.0], _ORACLE_OFFSETS, -_ORACLE_OFFSETS])
    xs = (centers[:, None] + steps[None, :]).ravel()
    xs = xs[(xs >= lo) & (xs <= hi)]
    vals = np.abs(np.asarray(g(xs), dtype=float))
    vals[~np.isfinite(vals)] = 0.0
    best = int(np.argmax(vals))
    return float(xs[best]), float(vals[best])


def _oracle_clip(
    g: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    points: Sequence[float] = (),
) -> Interval:
    """
    Replace infinite ends by a point beyond which |g| has decayed below threshold.

    The tails are walked outwards from the largest |g| found near
    ``points``, the finite ends and 0.

    Raises:
        DomainError: If |g| vanishes everywhere it was sampled
    """
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    anchor, peak = _oracle_anchor(g, lo, hi, points)
    if not peak > 0.0:
        raise DomainError(
            "riemann_oracle cannot locate the integrand's mass on an infinite domain; "
            "pass points near it"
        )
    new_lo, new_hi = lo, hi
    for side in (-1.0, 1.0):
        end = lo if side < 0 else hi
        if math.isfinite(end):
            continue
        xs = anchor + side * _ORACLE_OFFSETS
        vals = np.abs(np.asarray(g(xs), dtype=float))
        peak = max(peak, float(np.max(vals)))
        cut = xs[-1]
        for i in range(len(xs) - 1):
            if vals[i] <= _ORACLE_TAIL_THRESHOLD * peak and vals[i + 1] <= vals[i]:
                cut = xs[i + 1]
                break
        if side < 0:
            new_lo = float(cut)
        else:
            new_hi = float(cut)
    return new_lo, new_hi


def riemann_oracle(
    g: Callable[[np.ndarray], np.ndarray],
    domain: Interval,
    n_points: int,
    points: Sequence[float] = (),
) -> float:
    """
    Composite midpoint rule, the deliberately simple cross-check.

    ``g`` must accept numpy arrays. Infinite ends are clipped where the
    integrand has decayed by a factor 1e-18 relative to its largest sampled
    value, which keeps the discarded tail mass far below 1e-12 for
    exponentially decaying integrands. The tails are measured from the
    largest |g| found near ``points``, the finite ends and 0, so ``points``
    should include a point near the mass when it lies far from all of them.
    Each piece between ``points`` receives ``n_points`` midpoints.

    Raises:
        DomainError: If ``n_points < 1000``, or if |g| vanishes wherever the
            tails could be measured from
    """
    if n_points < _ORACLE_MIN_POINTS:
        raise DomainError(f"riemann_oracle needs at least {_ORACLE_MIN_POINTS} points")
    lo, hi = _oracle_clip(g, float(domain[0]), float(domain[1]), points)
    cuts = sorted({lo, hi, *[float(p) for p in points if lo < float(p) < hi]})
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        h = (b - a) / n_points
        mids = a + h * (np.arange(n_points) + 0.5)
        values = np.asarray(g(mids), dtype=float)
        total += (b - a) * float(np.mean(values))
    return total
