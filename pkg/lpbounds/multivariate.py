"""
Multivariate densities with exact norms and covariances.

A :class:`MultivariateDensity` is the law of ``A Y + t`` where ``Y`` is either a
vector of independent one-dimensional densities or a Gaussian N(mu, S). Norms
follow from Fubini and the change of variables

    ||F||_p = |det A|^(1/p - 1) * prod_i ||f_i||_p,

and the covariance is ``A diag(sigma_i^2) A^T`` (or ``A S A^T``), so no
n-dimensional cubature is ever needed. Monte Carlo is the only stochastic
cross-check.
"""

import hashlib
import json
import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import stats

from lpbounds.config import get_settings
from lpbounds.density import AnalyticDensity
from lpbounds.errors import DomainError, StochasticCheckError, UsageError
from lpbounds.exponents import INF, Exponent, format_exponent, reciprocal, require_norm_exponent
from lpbounds.functionals import (
    FunctionalKind,
    FunctionalMethod,
    FunctionalValue,
    log_lp_integral,
    lp_norm,
    sigma_alpha,
)
from lpbounds.special_functions import log_c_n, log_d_n
from lpbounds.verdicts import ClaimId, InequalityVerdict, make_verdict

logger = logging.getLogger(__name__)

_MAX_CONDITION = 1e12
_LOG_2PI = math.log(2.0 * math.pi)
_METHOD_RANK = {
    FunctionalMethod.CLOSED_FORM: 0,
    FunctionalMethod.EXACT_SEGMENT: 1,
    FunctionalMethod.ADAPTIVE: 2,
}


class MultivariateDensity:
    """
    Affine image of a product density or of a Gaussian on R^n.

    Use :meth:`product`, :meth:`gaussian_nd` or :meth:`standard_gaussian`.

    Raises:
        DomainError: On a singular or badly conditioned transform, a covariance
            that is not symmetric positive definite, or mismatched shapes
    """

    def __init__(
        self,
        factors: Optional[Sequence[Any]] = None,
        gaussian_mean: Optional[Sequence[float]] = None,
        gaussian_cov: Optional[Any] = None,
        transform: Optional[Any] = None,
        shift: Optional[Sequence[float]] = None,
    ) -> None:
        if (factors is None) == (gaussian_cov is None):
            raise DomainError("Give either product factors or a Gaussian covariance")
        if factors is not None:
            self.factors: Optional[List[Any]] = list(factors)
            n = len(self.factors)
            if n < 1:
                raise DomainError("A product density needs at least one factor")
            self._base_mean = np.array([float(f.mean()) for f in self.factors])
            variances = [float(sigma_alpha(f, 2.0).value) ** 2 for f in self.factors]
            self._base_cov = np.diag(variances)
            self._gaussian: Any = None
        else:
            self.factors = None
            cov = np.array(gaussian_cov, dtype=float)
            n = cov.shape[0]
            if cov.shape != (n, n) or not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
                raise DomainError("Gaussian covariance must be a symmetric square matrix")
            if np.min(np.linalg.eigvalsh(cov)) <= 0:
                raise DomainError("Gaussian covariance must be positive definite")
            mean = np.zeros(n) if gaussian_mean is None else np.asarray(gaussian_mean, float)
            if mean.shape != (n,):
                raise DomainError(f"Gaussian mean must have length {n}")
            self._base_mean = mean
            self._base_cov = cov
            self._gaussian = stats.multivariate_normal(mean=mean, cov=cov)
        self.n = n

        a = np.eye(n) if transform is None else np.array(transform, dtype=float)
        if a.shape != (n, n):
            raise DomainError(f"Transform must be {n}x{n}, got {a.shape}")
        sign, log_abs_det = np.linalg.slogdet(a)
        if sign == 0 or not np.isfinite(log_abs_det) or np.linalg.cond(a) > _MAX_CONDITION:
            raise DomainError("Transform must be invertible and reasonably conditioned")
        t = np.zeros(n) if shift is None else np.asarray(shift, dtype=float)
        if t.shape != (n,):
            raise DomainError(f"Shift must have length {n}")
        self.transform = a
        self.shift = t
        self.log_abs_det = float(log_abs_det)
        self._inverse = np.linalg.inv(a)
        for arr in (self.transform, self.shift, self._base_mean, self._base_cov):
            arr.setflags(write=False)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def product(
        cls,
        factors: Sequence[Any],
        transform: Optional[Any] = None,
        shift: Optional[Sequence[float]] = None,
    ) -> "MultivariateDensity":
        return cls(factors=factors, transform=transform, shift=shift)

    @classmethod
    def gaussian_nd(
        cls, mean: Optional[Sequence[float]], cov: Any, transform: Optional[Any] = None
    ) -> "MultivariateDensity":
        return cls(gaussian_mean=mean, gaussian_cov=cov, transform=transform)

    @classmethod
    def standard_gaussian(cls, n: int) -> "MultivariateDensity":
        return cls(gaussian_cov=np.eye(n))

    def transformed(self, a: Any, t: Optional[Sequence[float]] = None) -> "MultivariateDensity":
        """Law of ``a X + t``."""
        a = np.asarray(a, dtype=float)
        shift = a @ self.shift + (np.zeros(self.n) if t is None else np.asarray(t, float))
        return MultivariateDensity(
            factors=self.factors,
            gaussian_mean=None if self.factors is not None else self._base_mean,
            gaussian_cov=None if self.factors is not None else self._base_cov,
            transform=a @ self.transform,
            shift=shift,
        )

    # ------------------------------------------------------------------
    # Exact quantities
    # ------------------------------------------------------------------

    @property
    def is_gaussian(self) -> bool:
        return self.factors is None

    @property
    def is_log_concave(self) -> bool:
        if self.factors is None:
            return True
        return all(getattr(f, "is_log_concave", False) for f in self.factors)

    @property
    def symmetric(self) -> bool:
        """Central symmetry about the mean."""
        if self.factors is None:
            return True
        return all(bool(getattr(f, "symmetric", False)) for f in self.factors)

    def mean(self) -> np.ndarray:
        return self.transform @ self._base_mean + self.shift

    def covariance(self) -> np.ndarray:
        """Exact covariance A S A^T."""
        cov = self.transform @ self._base_cov @ self.transform.T
        return 0.5 * (cov + cov.T)

    def log_det_covariance(self) -> float:
        """log |Sigma| = 2 log|det A| + log|S|."""
        sign, base = np.linalg.slogdet(self._base_cov)
        return 2.0 * self.log_abs_det + float(base)

    def mode(self) -> np.ndarray:
        if self.factors is None:
            base = self._base_mean
        else:
            base = np.array([f.mode_and_supnorm()[0] for f in self.factors])
        return self.transform @ base + self.shift

    def log_density(self, x: Any) -> np.ndarray:
        """log F at the rows of ``x`` (shape (..., n))."""
        xs = np.asarray(x, dtype=float)
        y = (xs - self.shift) @ self._inverse.T
        if self.factors is None:
            base = np.asarray(self._gaussian.logpdf(y)).reshape(y.shape[:-1])
        else:
            base = sum(
                np.asarray(f.log_density(y[..., i]), dtype=float)
                for i, f in enumerate(self.factors)
            )
        return base - self.log_abs_det

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` points: factors by inverse CDF, Gaussians directly."""
        if self.factors is None:
            y = np.atleast_2d(self._gaussian.rvs(size=size, random_state=rng))
        else:
            cols = []
            for f in self.factors:
                if hasattr(f, "ppf"):
                    cols.append(np.asarray(f.ppf(rng.uniform(size=size)), dtype=float))
                else:
                    cols.append(np.asarray(f.sample(rng, size), dtype=float))
            y = np.column_stack(cols)
        return y.reshape(size, self.n) @ self.transform.T + self.shift

    def describe(self) -> str:
        if self.factors is None:
            base = f"gaussian_nd(n={self.n})"
        else:
            base = "product(" + ", ".join(f.describe() for f in self.factors) + ")"
        if not np.array_equal(self.transform, np.eye(self.n)):
            base += "@A"
        return base

    def to_spec(self) -> Dict[str, Any]:
        spec: Dict[str, Any] = {
            "transform": self.transform.tolist(),
            "shift": self.shift.tolist(),
        }
        if self.factors is None:
            spec["gaussian_nd"] = {
                "mean": self._base_mean.tolist(),
                "cov": self._base_cov.tolist(),
            }
        else:
            spec["product"] = [f.to_spec() for f in self.factors]
        return spec

    def digest(self) -> str:
        payload = json.dumps(self.to_spec(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:12]

    def sigma_digest(self) -> str:
        payload = json.dumps([repr(float(v)) for v in self.covariance().ravel()]).encode()
        return hashlib.sha256(payload).hexdigest()[:12]


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def _worst_method(methods: Sequence[FunctionalMethod]) -> FunctionalMethod:
    return max(methods, key=lambda m: _METHOD_RANK[m])


def log_lp_integral_nd(big_f: MultivariateDensity, p: float) -> float:
    """log int F^p for finite p >= 1."""
    if big_f.is_gaussian:
        log_norm_const = 0.5 * big_f.n * _LOG_2PI + 0.5 * big_f.log_det_covariance()
        return (1.0 - p) * log_norm_const - 0.5 * big_f.n * math.log(p)
    assert big_f.factors is not None
    total = sum(log_lp_integral(f, p)[0] for f in big_f.factors)
    return total + (1.0 - p) * big_f.log_abs_det


def lp_norm_nd(big_f: MultivariateDensity, p: Exponent) -> FunctionalValue:
    """
    ||F||_p for p in [1, inf], exact by factorization and change of variables.

    Raises:
        DomainError: If p < 1
    """
    p = require_norm_exponent(p)
    label = format_exponent(p)
    if big_f.is_gaussian:
        method = FunctionalMethod.CLOSED_FORM
        if p is INF:
            log_value = -(0.5 * big_f.n * _LOG_2PI + 0.5 * big_f.log_det_covariance())
        else:
            log_value = log_lp_integral_nd(big_f, float(p)) / float(p)
    else:
        assert big_f.factors is not None
        parts = [lp_norm(f, p) for f in big_f.factors]
        method = _worst_method([v.method for v in parts])
        log_value = sum(math.log(v.value) for v in parts)
        log_value += (reciprocal(p) - 1.0) * big_f.log_abs_det
    if p is not INF and float(p) == 1.0:
        log_value = 0.0
    value = math.exp(log_value)
    err = value * (1e-15 if method.is_exact else 1e-9) * big_f.n
    return FunctionalValue(
        kind=FunctionalKind.LP_NORM,
        value=value,
        error_estimate=err,
        method=method,
        parameter=label,
    )


def covariance(big_f: MultivariateDensity) -> np.ndarray:
    return big_f.covariance()


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------


def _require_dimension(big_f: MultivariateDensity, claim: str) -> None:
    if big_f.n < 2:
        raise UsageError(f"{claim} is stated for n >= 2, got n={big_f.n}")


def _verdict(
    claim: ClaimId,
    big_f: MultivariateDensity,
    lhs: float,
    rhs: float,
    exact: bool,
    p: Optional[Exponent] = None,
    q: Optional[Exponent] = None,
) -> InequalityVerdict:
    return make_verdict(
        claim,
        lhs,
        rhs,
        exact=exact,
        p=p,
        q=q,
        n=big_f.n,
        density=big_f,
        sigma_digest=big_f.sigma_digest(),
    )


def check_theorem2(big_f: MultivariateDensity, p: Exponent, q: Exponent) -> InequalityVerdict:
    """
    ||F||_p <= C(n)^(1-1/q) D(n)^(1-1/p) |Sigma|^((1/p-1/q)/2) ||F||_q.

    Raises:
        UsageError: If n < 2
    """
    _require_dimension(big_f, "The multivariate norm inequality")
    p, q = require_norm_exponent(p), require_norm_exponent(q, "q")
    rp, rq = reciprocal(p), reciprocal(q)
    norm_p, norm_q = lp_norm_nd(big_f, p), lp_norm_nd(big_f, q)
    n = big_f.n
    log_rhs = (
        (1.0 - rq) * log_c_n(n)
        + (1.0 - rp) * log_d_n(n)
        + 0.5 * (rp - rq) * big_f.log_det_covariance()
        + math.log(norm_q.value)
    )
    exact = norm_p.method.is_exact and norm_q.method.is_exact
    return _verdict(ClaimId.THEOREM2, big_f, norm_p.value, math.exp(log_rhs), exact, p, q)


def check_lemma2(big_f: MultivariateDensity, p: Exponent) -> InequalityVerdict:
    """1 <= (C(n) |Sigma|^(1/2))^(1-1/p) ||F||_p; any density with finite covariance."""
    p = require_norm_exponent(p)
    norm_p = lp_norm_nd(big_f, p)
    log_rhs = (1.0 - reciprocal(p)) * (
        log_c_n(big_f.n) + 0.5 * big_f.log_det_covariance()
    ) + math.log(norm_p.value)
    return _verdict(ClaimId.LEMMA2, big_f, 1.0, math.exp(log_rhs), norm_p.method.is_exact, p)


def check_lemma4_nd(big_f: MultivariateDensity, n: Optional[int] = None) -> InequalityVerdict:
    """||F||_inf <= 2^n ||F||_2^2."""
    if n is not None and n != big_f.n:
        raise UsageError(f"Dimension mismatch: density has n={big_f.n}, got n={n}")
    sup, norm2 = lp_norm_nd(big_f, INF), lp_norm_nd(big_f, 2.0)
    exact = sup.method.is_exact and norm2.method.is_exact
    return _verdict(
        ClaimId.LEMMA4_ND, big_f, sup.value, 2.0**big_f.n * norm2.value**2, exact
    )


def check_lemma6(big_f: MultivariateDensity) -> InequalityVerdict:
    """
    ||F||_inf <= D(n) / |Sigma|^(1/2).

    Raises:
        UsageError: If n < 2
    """
    _require_dimension(big_f, "The multivariate sup-norm bound")
    sup = lp_norm_nd(big_f, INF)
    rhs = math.exp(log_d_n(big_f.n) - 0.5 * big_f.log_det_covariance())
    return _verdict(ClaimId.LEMMA6, big_f, sup.value, rhs, sup.method.is_exact)


def check_lemma6_square_bound(big_f: MultivariateDensity) -> InequalityVerdict:
    """||F||_2^2 <= D(n) / (2^n |Sigma|^(1/2)), the step before the sup-norm bound."""
    _require_dimension(big_f, "The multivariate square-norm bound")
    norm2 = lp_norm_nd(big_f, 2.0)
    rhs = math.exp(
        log_d_n(big_f.n) - big_f.n * math.log(2.0) - 0.5 * big_f.log_det_covariance()
    )
    return _verdict(ClaimId.LEMMA6_SQUARE, big_f, norm2.value**2, rhs, norm2.method.is_exact)


def check_symmetric_density_bound_nd(big_f: MultivariateDensity) -> InequalityVerdict:
    """F(c) <= 2^(-n/2) D(n) / |Sigma|^(1/2) for F centrally symmetric about c."""
    _require_dimension(big_f, "The multivariate symmetric density bound")
    if not big_f.symmetric:
        raise UsageError("The multivariate symmetric density bound needs a symmetric density")
    value = math.exp(float(big_f.log_density(big_f.mean()[None, :])[0]))
    rhs = math.exp(
        log_d_n(big_f.n) - 0.5 * big_f.n * math.log(2.0) - 0.5 * big_f.log_det_covariance()
    )
    exact = lp_norm_nd(big_f, INF).method.is_exact
    return _verdict(ClaimId.SYMMETRIC_DENSITY_BOUND_ND, big_f, value, rhs, exact)


# ---------------------------------------------------------------------------
# Monte Carlo cross-check
# ---------------------------------------------------------------------------


class MonteCarloCheck(BaseModel):
    """Outcome of a Monte Carlo estimate of int F^p."""

    model_config = ConfigDict(frozen=True)

    p: float
    samples: int
    seed: int
    estimate: float
    ci_low: float
    ci_high: float
    exact: float
    contains_exact: bool
    reran: bool = False

    @property
    def confidence_interval(self) -> tuple:
        return self.ci_low, self.ci_high


def _mc_estimate(
    big_f: MultivariateDensity, p: float, samples: int, seed_seq: np.random.SeedSequence, z: float
) -> tuple:
    rng = np.random.default_rng(seed_seq)
    x = big_f.sample(rng, samples)
    weights = np.exp((p - 1.0) * big_f.log_density(x))
    estimate = float(np.mean(weights))
    half = z * float(np.std(weights, ddof=1)) / math.sqrt(samples) if samples > 1 else 0.0
    return estimate, estimate - half, estimate + half


def mc_validate_norm(
    big_f: MultivariateDensity,
    p: float,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    confidence: Optional[float] = None,
    raise_on_failure: bool = False,
) -> MonteCarloCheck:
    """
    Estimate int F^p = E_F[F^(p-1)] by sampling from F itself.

    When the confidence interval misses the exact value the estimate is
    repeated once on a child stream of the seed; a second miss is reported
    as ``contains_exact=False``.

    Raises:
        DomainError: If p is not a finite number >= 1
        StochasticCheckError: On a second miss when ``raise_on_failure`` is set
    """
    cfg = get_settings()
    samples = cfg.mc_samples if samples is None else int(samples)
    seed = cfg.default_seed if seed is None else int(seed)
    confidence = cfg.mc_confidence if confidence is None else confidence
    p_exp = require_norm_exponent(p)
    if p_exp is INF:
        raise DomainError("Monte Carlo validation needs a finite p")
    p = float(p_exp)
    z = float(stats.norm.ppf(0.5 + 0.5 * confidence))
    exact = math.exp(log_lp_integral_nd(big_f, p))

    seed_seq = np.random.SeedSequence(seed)
    estimate, lo, hi = _mc_estimate(big_f, p, samples, seed_seq, z)
    reran = False
    if not lo <= exact <= hi:
        logger.warning(
            f"Monte Carlo interval [{lo!r}, {hi!r}] misses exact {exact!r}; "
            "rerunning on a child seed"
        )
        reran = True
        estimate, lo, hi = _mc_estimate(big_f, p, samples, seed_seq.spawn(1)[0], z)
    contains = lo <= exact <= hi
    result = MonteCarloCheck(
        p=p,
        samples=samples,
        seed=seed,
        estimate=estimate,
        ci_low=lo,
        ci_high=hi,
        exact=exact,
        contains_exact=contains,
        reran=reran,
    )
    if not contains:
        logger.error(f"Monte Carlo check failed twice for {big_f.describe()} at p={p}")
        if raise_on_failure:
            raise StochasticCheckError(
                f"Monte Carlo interval [{lo!r}, {hi!r}] excludes the exact value {exact!r}"
            )
    return result


# ---------------------------------------------------------------------------
# Families for sweeps
# ---------------------------------------------------------------------------


def random_transform(
    n: int, rng: np.random.Generator, max_condition: float = 100.0
) -> np.ndarray:
    """
    Random invertible n x n matrix U diag(s) V with singular values in [1, max_condition].

    The condition number is at most ``max_condition`` and |det| >= 1.
    """
    if n < 1 or max_condition < 1:
        raise DomainError("random_transform needs n >= 1 and max_condition >= 1")
    if n == 1:
        return np.array([[float(rng.uniform(1.0, max_condition))]])
    u = stats.ortho_group.rvs(n, random_state=rng)
    v = stats.ortho_group.rvs(n, random_state=rng)
    s = np.exp(rng.uniform(0.0, math.log(max_condition), size=n))
    return u @ np.diag(s) @ v


def shear(n: int) -> np.ndarray:
    """Unit upper-triangular matrix with ones above the diagonal (det 1)."""
    return np.triu(np.ones((n, n)))


def standard_multivariate_families(n: int, seed: int = 0) -> List[MultivariateDensity]:
    """
    Correlated Gaussians and (transformed) products of catalog members in dimension n.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    a = random_transform(n, rng)
    pool = [
        AnalyticDensity.exponential(1.0),
        AnalyticDensity.uniform(0.0, 1.0),
        AnalyticDensity.laplace(0.0, 1.0),
        AnalyticDensity.gaussian(0.0, 2.0),
        AnalyticDensity.logistic(0.0, 1.0),
        AnalyticDensity.gamma(2.0),
    ]
    factors = [pool[i % len(pool)] for i in range(n)]
    exps = [AnalyticDensity.exponential(1.0)] * n
    return [
        MultivariateDensity.standard_gaussian(n),
        MultivariateDensity.gaussian_nd(None, a @ a.T),
        MultivariateDensity.gaussian_nd(None, np.diag(np.arange(1.0, n + 1.0) ** 2)),
        MultivariateDensity.product(exps),
        MultivariateDensity.product(factors),
        MultivariateDensity.product(factors, transform=shear(n)),
        MultivariateDensity.product(factors, transform=random_transform(n, rng)),
    ]
