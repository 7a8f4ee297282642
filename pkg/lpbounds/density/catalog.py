"""
Analytic catalog densities with closed-form functionals.

Every member is stored as the law of ``loc + scale * Z`` where ``Z`` follows the
standard member of its family (scipy.stats parameterization). A negative scale
encodes a reflection, so the catalog is closed under every affine map. The
closed forms below are the ones for ``Z``; the usual change-of-variables rules
carry them to ``X``.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy import special, stats

from lpbounds.errors import DomainError, LogConcavityError


class Family(str, Enum):
    """Catalog families."""

    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"
    LAPLACE = "laplace"
    UNIFORM = "uniform"
    LOGISTIC = "logistic"
    GAMMA = "gamma"


SYMMETRIC_FAMILIES = frozenset({Family.GAUSSIAN, Family.LAPLACE, Family.UNIFORM, Family.LOGISTIC})

_LOG_2PI = math.log(2.0 * math.pi)


def _standard_log_lp_integral(family: Family, shape: float, p: float) -> float:
    """log int f_Z^p for the standard member."""
    if family is Family.GAUSSIAN:
        return 0.5 * (1.0 - p) * _LOG_2PI - 0.5 * math.log(p)
    if family is Family.EXPONENTIAL:
        return -math.log(p)
    if family is Family.LAPLACE:
        return (1.0 - p) * math.log(2.0) - math.log(p)
    if family is Family.UNIFORM:
        return 0.0
    if family is Family.LOGISTIC:
        return float(2.0 * special.gammaln(p) - special.gammaln(2.0 * p))
    k = shape
    m = p * (k - 1.0) + 1.0
    return float(special.gammaln(m) - m * math.log(p) - p * special.gammaln(k))


def _standard_mode_and_log_sup(family: Family, shape: float) -> Tuple[float, float]:
    if family is Family.GAUSSIAN:
        return 0.0, -0.5 * _LOG_2PI
    if family is Family.EXPONENTIAL:
        return 0.0, 0.0
    if family is Family.LAPLACE:
        return 0.0, -math.log(2.0)
    if family is Family.UNIFORM:
        return 0.5, 0.0
    if family is Family.LOGISTIC:
        return 0.0, -math.log(4.0)
    k1 = shape - 1.0
    log_sup = (k1 * math.log(k1) if k1 > 0 else 0.0) - k1 - float(special.gammaln(shape))
    return k1, log_sup


def _standard_mean(family: Family, shape: float) -> float:
    return {
        Family.GAUSSIAN: 0.0,
        Family.EXPONENTIAL: 1.0,
        Family.LAPLACE: 0.0,
        Family.UNIFORM: 0.5,
        Family.LOGISTIC: 0.0,
        Family.GAMMA: shape,
    }[family]


def _standard_sigma1(family: Family, shape: float) -> float:
    """E|Z - E[Z]|."""
    if family is Family.GAUSSIAN:
        return math.sqrt(2.0 / math.pi)
    if family is Family.EXPONENTIAL:
        return 2.0 / math.e
    if family is Family.LAPLACE:
        return 1.0
    if family is Family.UNIFORM:
        return 0.25
    if family is Family.LOGISTIC:
        return 2.0 * math.log(2.0)
    k = shape
    return math.exp(math.log(2.0) + k * math.log(k) - k - float(special.gammaln(k)))


def _standard_sigma2(family: Family, shape: float) -> float:
    return {
        Family.GAUSSIAN: 1.0,
        Family.EXPONENTIAL: 1.0,
        Family.LAPLACE: math.sqrt(2.0),
        Family.UNIFORM: 1.0 / math.sqrt(12.0),
        Family.LOGISTIC: math.pi / math.sqrt(3.0),
        Family.GAMMA: math.sqrt(shape),
    }[family]


def _standard_entropy(family: Family, shape: float) -> float:
    if family is Family.GAUSSIAN:
        return 0.5 * (_LOG_2PI + 1.0)
    if family is Family.EXPONENTIAL:
        return 1.0
    if family is Family.LAPLACE:
        return 1.0 + math.log(2.0)
    if family is Family.UNIFORM:
        return 0.0
    if family is Family.LOGISTIC:
        return 2.0
    k = shape
    return float(k + special.gammaln(k) + (1.0 - k) * special.digamma(k))


@dataclass(frozen=True)
class AnalyticDensity:
    """
    A catalog density, the law of ``loc + scale * Z``.

    Use the named constructors (:meth:`gaussian`, :meth:`exponential`, ...)
    rather than the raw fields. Symmetric families are canonicalized to a
    positive scale so equal densities compare equal.

    Raises:
        DomainError: On a zero or non-finite scale or location
        LogConcavityError: For a gamma shape below 1
    """

    family: Family
    loc: float = 0.0
    scale: float = 1.0
    shape: float = 1.0
    _frozen: Any = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        loc, scale, shape = float(self.loc), float(self.scale), float(self.shape)
        if not (math.isfinite(loc) and math.isfinite(scale)) or scale == 0.0:
            raise DomainError(
                f"{family.value} density needs a finite location and a non-zero finite scale, "
                f"got loc={loc}, scale={scale}"
            )
        if family is Family.GAMMA:
            if not math.isfinite(shape) or shape < 1.0:
                raise LogConcavityError(
                    f"Gamma shape must be >= 1 for a log-concave density, got {shape}"
                )
        else:
            shape = 1.0
        if family in SYMMETRIC_FAMILIES and scale < 0:
            if family is Family.UNIFORM:
                loc = loc + scale
            scale = -scale
        object.__setattr__(self, "loc", loc)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "shape", shape)
        base = stats.gamma(shape) if family is Family.GAMMA else _STANDARD[family]
        object.__setattr__(self, "_frozen", base)

    # ------------------------------------------------------------------
    # Named constructors
    # ------------------------------------------------------------------

    @classmethod
    def gaussian(cls, mu: float = 0.0, sigma: float = 1.0) -> "AnalyticDensity":
        _positive("sigma", sigma)
        return cls(Family.GAUSSIAN, loc=mu, scale=sigma)

    @classmethod
    def exponential(
        cls, rate: float = 1.0, loc: float = 0.0, reflected: bool = False
    ) -> "AnalyticDensity":
        _positive("rate", rate)
        return cls(Family.EXPONENTIAL, loc=loc, scale=(-1.0 if reflected else 1.0) / rate)

    @classmethod
    def laplace(cls, loc: float = 0.0, scale: float = 1.0) -> "AnalyticDensity":
        _positive("scale", scale)
        return cls(Family.LAPLACE, loc=loc, scale=scale)

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> "AnalyticDensity":
        if not a < b:
            raise DomainError(f"uniform(a, b) needs a < b, got a={a}, b={b}")
        return cls(Family.UNIFORM, loc=a, scale=b - a)

    @classmethod
    def logistic(cls, loc: float = 0.0, scale: float = 1.0) -> "AnalyticDensity":
        _positive("scale", scale)
        return cls(Family.LOGISTIC, loc=loc, scale=scale)

    @classmethod
    def gamma(
        cls, shape: float, rate: float = 1.0, loc: float = 0.0, reflected: bool = False
    ) -> "AnalyticDensity":
        _positive("rate", rate)
        return cls(Family.GAMMA, loc=loc, scale=(-1.0 if reflected else 1.0) / rate, shape=shape)

    @classmethod
    def from_params(cls, family: str, params: Dict[str, Any]) -> "AnalyticDensity":
        """
        Build from the human parameters used in density spec files.

        Raises:
            DomainError: On an unknown family or unexpected parameter names
        """
        try:
            fam = Family(family)
        except ValueError as e:
            known = ", ".join(f.value for f in Family)
            raise DomainError(f"Unknown family {family!r}; expected one of {known}") from e
        builders = {
            Family.GAUSSIAN: cls.gaussian,
            Family.EXPONENTIAL: cls.exponential,
            Family.LAPLACE: cls.laplace,
            Family.UNIFORM: cls.uniform,
            Family.LOGISTIC: cls.logistic,
            Family.GAMMA: cls.gamma,
        }
        try:
            return builders[fam](**params)
        except TypeError as e:
            raise DomainError(f"Bad parameters for {fam.value}: {e}") from e

    # ------------------------------------------------------------------
    # Description
    # ------------------------------------------------------------------

    @property
    def symmetric(self) -> bool:
        return self.family in SYMMETRIC_FAMILIES

    @property
    def center(self) -> Optional[float]:
        if not self.symmetric:
            return None
        if self.family is Family.UNIFORM:
            return self.loc + 0.5 * self.scale
        return self.loc

    is_log_concave = True

    @property
    def params(self) -> Dict[str, Any]:
        """Human parameters, inverse of :meth:`from_params`."""
        f = self.family
        if f is Family.GAUSSIAN:
            return {"mu": self.loc, "sigma": self.scale}
        if f is Family.LAPLACE or f is Family.LOGISTIC:
            return {"loc": self.loc, "scale": self.scale}
        if f is Family.UNIFORM:
            return {"a": self.loc, "b": self.loc + self.scale}
        out: Dict[str, Any] = {"rate": 1.0 / abs(self.scale), "loc": self.loc}
        if self.scale < 0:
            out["reflected"] = True
        if f is Family.GAMMA:
            out = {"shape": self.shape, **out}
        return out

    def describe(self) -> str:
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items() if not isinstance(v, bool))
        suffix = ", reflected" if self.scale < 0 else ""
        return f"{self.family.value}({inner}{suffix})"

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.family.value, "params": self.params}

    def digest(self) -> str:
        payload = json.dumps(self.to_spec(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:12]

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def _to_standard(self, x: Any) -> Any:
        return (np.asarray(x, dtype=float) - self.loc) / self.scale

    def log_density(self, x: Any) -> Any:
        z = self._to_standard(x)
        out = self._frozen.logpdf(z) - math.log(abs(self.scale))
        if np.ndim(out) == 0:
            return float(out)
        return out

    def pdf(self, x: Any) -> Any:
        return np.exp(self.log_density(x))

    def support(self) -> Tuple[float, float]:
        lo, hi = self._frozen.support()
        ends = sorted((self.loc + self.scale * float(lo), self.loc + self.scale * float(hi)))
        return ends[0], ends[1]

    def breakpoints(self) -> Tuple[float, ...]:
        """Points where log f is not smooth (inside the support)."""
        if self.family is Family.LAPLACE:
            return (self.loc,)
        return ()

    def tail_rates(self) -> Tuple[float, float]:
        """Lower bounds on the exponential decay rate of each tail."""
        rate = 1.0 / abs(self.scale)
        if self.family is Family.GAMMA:
            # Z^(k-1) e^-z decays at least like e^(-z/2) once past the mode.
            rate *= 0.5
        return rate, rate

    def ppf(self, u: Any) -> np.ndarray:
        q = np.asarray(u, dtype=float)
        if self.scale < 0:
            q = 1.0 - q
        return np.atleast_1d(self.loc + self.scale * self._frozen.ppf(q))

    # ------------------------------------------------------------------
    # Closed forms
    # ------------------------------------------------------------------

    def mode_and_supnorm(self) -> Tuple[float, float]:
        z_mode, log_sup = _standard_mode_and_log_sup(self.family, self.shape)
        return self.loc + self.scale * z_mode, math.exp(log_sup - math.log(abs(self.scale)))

    def log_lp_integral(self, p: float) -> float:
        """log int f^p for finite p >= 1."""
        return _standard_log_lp_integral(self.family, self.shape, p) + (1.0 - p) * math.log(
            abs(self.scale)
        )

    def mean(self) -> float:
        return self.loc + self.scale * _standard_mean(self.family, self.shape)

    def sigma_closed_form(self, alpha: float) -> Optional[float]:
        """sigma_alpha for alpha in {1, 2}, None otherwise."""
        if alpha == 1.0:
            return abs(self.scale) * _standard_sigma1(self.family, self.shape)
        if alpha == 2.0:
            return abs(self.scale) * _standard_sigma2(self.family, self.shape)
        return None

    def entropy(self) -> float:
        return _standard_entropy(self.family, self.shape) + math.log(abs(self.scale))

    def affine_image(self, c: float, t: float) -> "AnalyticDensity":
        """
        Density of cX + t, again a catalog member.

        Raises:
            DomainError: If c == 0
        """
        c, t = float(c), float(t)
        if c == 0 or not math.isfinite(c) or not math.isfinite(t):
            raise DomainError(f"Affine scale must be finite and non-zero, got c={c}")
        return AnalyticDensity(
            self.family, loc=c * self.loc + t, scale=c * self.scale, shape=self.shape
        )


_STANDARD = {
    Family.GAUSSIAN: stats.norm(),
    Family.EXPONENTIAL: stats.expon(),
    Family.LAPLACE: stats.laplace(),
    Family.UNIFORM: stats.uniform(),
    Family.LOGISTIC: stats.logistic(),
}


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(float(value)) and float(value) > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value}")
