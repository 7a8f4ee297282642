"""
Piecewise log-linear densities.

A density whose logarithm is continuous and piecewise linear with a
non-increasing slope sequence. Every integral needed by the functionals
(mass, Lp-norms, mean, second central moment, first absolute central moment,
entropy, self-overlap) is a finite sum of closed-form segment integrals.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from lpbounds.errors import DomainError, LogConcavityError, SymmetryError
from lpbounds.quadrature import local_moments, log_local_mass

logger = logging.getLogger(__name__)

_SLOPE_TOLERANCE = 1e-9
_SYMMETRY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class LocalPiece:
    """
    One linear piece of a log-density written from its larger end.

    On the piece, log f(anchor + orientation * u) = log_anchor + slope * u for
    0 <= u <= length, with ``slope <= 0``.
    """

    anchor: float
    log_anchor: float
    orientation: float
    slope: float
    length: float

    def moments(self) -> Tuple[float, float, float]:
        """Unscaled local moments J0, J1, J2 (multiply by exp(log_anchor))."""
        return local_moments(self.slope, self.length)


def log_integral_exp_pl(
    knots: np.ndarray, values: np.ndarray, left_slope: float, right_slope: float
) -> float:
    """
    log int exp(g) for a continuous piecewise linear g.

    ``g`` interpolates ``values`` at ``knots`` and continues with the given tail
    slopes, which must make both tails integrable.
    """
    if not left_slope > 0 or not right_slope < 0:
        raise DomainError("Tail slopes must satisfy left > 0 > right for a finite integral")
    terms = [values[0] + log_local_mass(-left_slope, math.inf)]
    widths = np.diff(knots)
    for i, width in enumerate(widths):
        slope = (values[i + 1] - values[i]) / width
        if slope > 0:
            terms.append(values[i + 1] + log_local_mass(-slope, width))
        else:
            terms.append(values[i] + log_local_mass(slope, width))
    terms.append(values[-1] + log_local_mass(right_slope, math.inf))
    return float(logsumexp(terms))


class PiecewiseLogLinearDensity:
    """
    Log-concave density with a continuous piecewise linear log.

    Interior slopes are derived from consecutive (knot, log value) pairs and are
    never stored separately. Inputs need not be normalized: the log mass of the
    input is subtracted and kept as :attr:`log_normalizer`.

    Args:
        knots: Strictly increasing knot positions x_1 < ... < x_k (k >= 1)
        log_values: log f at each knot, up to an additive constant
        left_slope: Slope of log f on (-inf, x_1], must be > 0
        right_slope: Slope of log f on [x_k, inf), must be < 0
        symmetric: Declare mirror symmetry about (x_1 + x_k)/2; verified on
            construction

    Raises:
        LogConcavityError: If the slope sequence increases anywhere or a tail
            slope has the wrong sign
        SymmetryError: If ``symmetric`` is declared but the check fails
        DomainError: On malformed arrays
    """

    def __init__(
        self,
        knots: Sequence[float],
        log_values: Sequence[float],
        left_slope: float,
        right_slope: float,
        symmetric: bool = False,
    ) -> None:
        x = np.array(knots, dtype=float).reshape(-1)
        v = np.array(log_values, dtype=float).reshape(-1)
        if x.size < 1:
            raise DomainError("A piecewise log-linear density needs at least one knot")
        if x.size != v.size:
            raise DomainError(
                f"knots ({x.size}) and log_values ({v.size}) must have the same length"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise DomainError("knots and log_values must be finite")
        if np.any(np.diff(x) <= 0):
            raise DomainError("knots must be strictly increasing")
        left_slope = float(left_slope)
        right_slope = float(right_slope)
        if not (math.isfinite(left_slope) and left_slope > 0):
            raise LogConcavityError(f"left_slope must be positive and finite, got {left_slope}")
        if not (math.isfinite(right_slope) and right_slope < 0):
            raise LogConcavityError(f"right_slope must be negative and finite, got {right_slope}")

        slopes = np.concatenate([[left_slope], np.diff(v) / np.diff(x), [right_slope]])
        increases = np.diff(slopes)
        allowed = _SLOPE_TOLERANCE * np.maximum(1.0, np.abs(slopes[1:]))
        bad = np.nonzero(increases > allowed)[0]
        if bad.size:
            i = int(bad[0])
            raise LogConcavityError(
                f"Slope sequence must be non-increasing for log-concavity: slope {i} is "
                f"{slopes[i]!r} but slope {i + 1} is {slopes[i + 1]!r}"
            )

        log_mass = log_integral_exp_pl(x, v, left_slope, right_slope)
        self._knots = x
        self._log_values = v - log_mass
        self._knots.setflags(write=False)
        self._log_values.setflags(write=False)
        self._slopes = slopes
        self._slopes.setflags(write=False)
        self._left_slope = left_slope
        self._right_slope = right_slope
        self._log_normalizer = log_mass
        self._symmetric = bool(symmetric)
        if self._symmetric:
            self._verify_symmetry()

    # ------------------------------------------------------------------
    # Basic accessors
    # ------------------------------------------------------------------

    @property
    def knots(self) -> np.ndarray:
        return self._knots

    @property
    def log_values(self) -> np.ndarray:
        """Normalized log density at the knots."""
        return self._log_values

    @property
    def left_slope(self) -> float:
        return self._left_slope

    @property
    def right_slope(self) -> float:
        return self._right_slope

    @property
    def slopes(self) -> np.ndarray:
        """Full slope sequence: left tail, interior slopes, right tail."""
        return self._slopes

    @property
    def log_normalizer(self) -> float:
        """Log mass of the input, subtracted during normalization."""
        return self._log_normalizer

    @property
    def symmetric(self) -> bool:
        return self._symmetric

    @property
    def center(self) -> Optional[float]:
        """Center of symmetry, None unless the density is declared symmetric."""
        if not self._symmetric:
            return None
        return 0.5 * (float(self._knots[0]) + float(self._knots[-1]))

    is_log_concave = True

    def support(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(float(k) for k in self._knots)

    def tail_rates(self) -> Tuple[float, float]:
        """Exponential decay rates of the left and right tails."""
        return self._left_slope, -self._right_slope

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def log_density(self, x: Any) -> Any:
        """log f(x), vectorized over numpy input."""
        xs = np.asarray(x, dtype=float)
        k0, kn = self._knots[0], self._knots[-1]
        v0, vn = self._log_values[0], self._log_values[-1]
        inner = np.interp(xs, self._knots, self._log_values)
        out = np.where(
            xs < k0,
            v0 + self._left_slope * (xs - k0),
            np.where(xs > kn, vn + self._right_slope * (xs - kn), inner),
        )
        if np.ndim(out) == 0:
            return float(out)
        return out

    def pdf(self, x: Any) -> Any:
        return np.exp(self.log_density(x))

    def mode_and_supnorm(self) -> Tuple[float, float]:
        """The maximizing knot and the density value there."""
        i = int(np.argmax(self._log_values))
        return float(self._knots[i]), math.exp(float(self._log_values[i]))

    # ------------------------------------------------------------------
    # Segment machinery
    # ------------------------------------------------------------------

    def _segments(self) -> List[Tuple[float, float, float]]:
        """(x0, x1, slope) for every linear piece, tails included."""
        x = self._knots
        segs = [(-math.inf, float(x[0]), self._left_slope)]
        for i in range(x.size - 1):
            segs.append((float(x[i]), float(x[i + 1]), float(self._slopes[i + 1])))
        segs.append((float(x[-1]), math.inf, self._right_slope))
        return segs

    def pieces(self, lo: float = -math.inf, hi: float = math.inf) -> Iterator[LocalPiece]:
        """Linear pieces of log f clipped to [lo, hi], each anchored at its larger end."""
        for x0, x1, slope in self._segments():
            a, b = max(x0, lo), min(x1, hi)
            if not a < b:
                continue
            if slope > 0:
                yield LocalPiece(b, float(self.log_density(b)), -1.0, -slope, b - a)
            else:
                yield LocalPiece(a, float(self.log_density(a)), 1.0, slope, b - a)

    def log_lp_integral(self, p: float) -> float:
        """log int f^p for finite p >= 1 (f^p is again piecewise log-linear)."""
        return log_integral_exp_pl(
            self._knots, p * self._log_values, p * self._left_slope, p * self._right_slope
        )

    def log_mass(self) -> float:
        """log int f; zero up to rounding after normalization."""
        return self.log_lp_integral(1.0)

    def mean(self) -> float:
        total = 0.0
        for piece in self.pieces():
            j0, j1, _ = piece.moments()
            total += math.exp(piece.log_anchor) * (piece.anchor * j0 + piece.orientation * j1)
        return total

    def central_moment2(self, center: Optional[float] = None) -> float:
        """E[(X - center)^2], center defaulting to the mean."""
        m = self.mean() if center is None else center
        total = 0.0
        for piece in self.pieces():
            j0, j1, j2 = piece.moments()
            d = piece.anchor - m
            total += math.exp(piece.log_anchor) * (
                d * d * j0 + 2.0 * d * piece.orientation * j1 + j2
            )
        return total

    def central_abs_moment1(self, center: Optional[float] = None) -> float:
        """E|X - center|, split at the center."""
        m = self.mean() if center is None else center
        total = 0.0
        for lo, hi, sign in ((-math.inf, m, -1.0), (m, math.inf, 1.0)):
            for piece in self.pieces(lo, hi):
                j0, j1, _ = piece.moments()
                total += sign * math.exp(piece.log_anchor) * (
                    (piece.anchor - m) * j0 + piece.orientation * j1
                )
        return total

    def entropy(self) -> float:
        """-int f log f."""
        total = 0.0
        for piece in self.pieces():
            j0, j1, _ = piece.moments()
            total -= math.exp(piece.log_anchor) * (piece.log_anchor * j0 + piece.slope * j1)
        return total

    def log_self_overlap(self, z: float) -> float:
        """
        log int f(x) f(x - z) dx, the difference density of two i.i.d. copies at z.

        The integrand is piecewise log-linear with knots at the union of the
        knots and the knots shifted by z, so the integral is exact.
        """
        grid = np.union1d(self._knots, self._knots + z)
        values = np.asarray(self.log_density(grid)) + np.asarray(self.log_density(grid - z))
        return log_integral_exp_pl(grid, values, 2.0 * self._left_slope, 2.0 * self._right_slope)

    # ------------------------------------------------------------------
    # Sampling
    # ------------------------------------------------------------------

    def ppf(self, u: Any) -> np.ndarray:
        """Exact inverse CDF, vectorized."""
        q = np.atleast_1d(np.asarray(u, dtype=float))
        segs = self._segments()
        masses = []
        for x0, x1, slope in segs:
            if slope > 0:
                log_m = float(self.log_density(x1)) + log_local_mass(-slope, x1 - x0)
            else:
                log_m = float(self.log_density(x0)) + log_local_mass(slope, x1 - x0)
            masses.append(math.exp(log_m))
        cum = np.cumsum(masses)
        cum /= cum[-1]
        index = np.minimum(np.searchsorted(cum, q, side="right"), len(segs) - 1)
        out = np.empty_like(q)
        starts = np.concatenate([[0.0], cum[:-1]])
        for i, (x0, x1, slope) in enumerate(segs):
            mask = index == i
            if not np.any(mask):
                continue
            m = np.maximum(q[mask] - starts[i], 0.0)
            if i == 0:
                # integrate from the right end of the left tail
                remaining = np.maximum(m, 1e-300)
                l1 = float(self.log_density(x1))
                out[mask] = x1 + (np.log(slope * remaining) - l1) / slope
            else:
                l0 = float(self.log_density(x0))
                scaled = m * math.exp(-l0)
                if slope == 0:
                    out[mask] = x0 + scaled
                else:
                    out[mask] = x0 + np.log1p(np.maximum(slope * scaled, -1.0 + 1e-16)) / slope
        return out

    # ------------------------------------------------------------------
    # Transforms and identity
    # ------------------------------------------------------------------

    def affine_image(self, c: float, t: float) -> "PiecewiseLogLinearDensity":
        """
        Density of cX + t.

        Raises:
            DomainError: If c == 0
        """
        c, t = float(c), float(t)
        if c == 0 or not math.isfinite(c) or not math.isfinite(t):
            raise DomainError(f"Affine scale must be finite and non-zero, got c={c}")
        shift = -math.log(abs(c))
        knots = c * self._knots + t
        values = self._log_values + shift
        if c > 0:
            left, right = self._left_slope / c, self._right_slope / c
        else:
            knots, values = knots[::-1], values[::-1]
            left, right = self._right_slope / c, self._left_slope / c
        return PiecewiseLogLinearDensity(knots, values, left, right, symmetric=self._symmetric)

    def _verify_symmetry(self) -> None:
        c = 0.5 * (float(self._knots[0]) + float(self._knots[-1]))
        half = float(self._knots[-1]) - c
        reach = half + 40.0 / min(self.tail_rates())
        offsets = np.concatenate([self._knots - c, np.linspace(0.0, reach, 101)])
        offsets = np.abs(offsets)
        right = np.asarray(self.log_density(c + offsets))
        left = np.asarray(self.log_density(c - offsets))
        worst = float(np.max(np.abs(right - left)))
        if worst > _SYMMETRY_TOLERANCE:
            raise SymmetryError(
                f"Density declared symmetric about {c!r} but mirrored log values "
                f"differ by {worst:.3e}"
            )

    def to_spec(self) -> Dict[str, Any]:
        return {
            "pll": {
                "knots": [float(k) for k in self._knots],
                "log_values": [float(v) for v in self._log_values],
                "left_slope": self._left_slope,
                "right_slope": self._right_slope,
            },
            "symmetric": self._symmetric,
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_spec(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:12]

    def describe(self) -> str:
        return f"pll{self._knots.size}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseLogLinearDensity):
            return NotImplemented
        return (
            np.array_equal(self._knots, other._knots)
            and np.array_equal(self._log_values, other._log_values)
            and self._left_slope == other._left_slope
            and self._right_slope == other._right_slope
            and self._symmetric == other._symmetric
        )

    def __hash__(self) -> int:
        return hash(self.digest())

    def __repr__(self) -> str:
        return (
            f"PiecewiseLogLinearDensity(knots={self._knots.tolist()}, "
            f"left_slope={self._left_slope}, right_slope={self._right_slope}, "
            f"symmetric={self._symmetric})"
        )
