"""
Derivative-free search for near-equality cases.

The tightness ratio of a claim is maximized over a parametric density family
with Nelder-Mead and random restarts. Every family is reparameterized onto
unconstrained coordinates, so each candidate the simplex visits is a valid
log-concave density.
"""

import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import optimize
from scipy.special import softmax

from lpbounds.config import get_settings
from lpbounds.density import AnalyticDensity, DensityHandle, PiecewiseLogLinearDensity
from lpbounds.density.catalog import SYMMETRIC_FAMILIES, Family
from lpbounds.errors import CounterexampleFound, DomainError, NonConvergenceError, UsageError
from lpbounds.exponents import Exponent, as_exponent, format_exponent, parse_exponent
from lpbounds.functionals import DensityProfile
from lpbounds.generator import symmetrize
from lpbounds.inequalities import ONE_DIMENSIONAL_CLAIMS, SYMMETRIC_ONLY_CLAIMS, check_claim
from lpbounds.verdicts import ClaimId, InequalityVerdict

logger = logging.getLogger(__name__)

CATALOG = "catalog"
# Raw coordinates are clipped here before exponentiation.
_CLIP = 8.0
_PLL_FAMILY = re.compile(r"^pll(\d+)$")
# Claims that are too expensive per evaluation or need more than (p, q, alpha).
_UNSEARCHABLE = frozenset({ClaimId.FINITE_MEASURE, ClaimId.DIFFERENCE_DENSITY_JENSEN})


# ---------------------------------------------------------------------------
# Parameterizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Parameterization:
    """Map from unconstrained coordinates to densities of one family."""

    name: str
    dimension: int
    build: Callable[[np.ndarray], DensityHandle]


def _pll_dimension(k: int) -> int:
    """k - 1 gaps, two tail slopes and, with interior knots, k slope logits."""
    return 2 * k + 1 if k > 1 else 2


def _pll_builder(k: int, symmetric: bool) -> Callable[[np.ndarray], DensityHandle]:
    def build(theta: np.ndarray) -> DensityHandle:
        gaps = np.exp(theta[: k - 1])
        left = math.exp(theta[k - 1])
        right = -math.exp(theta[k])
        if k > 1:
            # Decreasing weights in (0, 1) keep the interior slopes ordered.
            w = 1.0 - np.cumsum(softmax(theta[k + 1 : 2 * k + 1]))[: k - 1]
        else:
            w = np.empty(0)
        interior = right + (left - right) * w
        knots = np.concatenate([[0.0], np.cumsum(gaps)])
        log_values = np.concatenate([[0.0], np.cumsum(interior * gaps)])
        f = PiecewiseLogLinearDensity(knots, log_values, left, right)
        return symmetrize(f) if symmetric else f

    return build


_CATALOG_BUILDERS: Dict[Family, Callable[[np.ndarray], DensityHandle]] = {
    Family.GAUSSIAN: lambda t: AnalyticDensity.gaussian(t[0], math.exp(t[1])),
    Family.EXPONENTIAL: lambda t: AnalyticDensity.exponential(math.exp(t[0]), loc=t[1]),
    Family.LAPLACE: lambda t: AnalyticDensity.laplace(t[0], math.exp(t[1])),
    Family.UNIFORM: lambda t: AnalyticDensity.uniform(t[0], t[0] + math.exp(t[1])),
    Family.LOGISTIC: lambda t: AnalyticDensity.logistic(t[0], math.exp(t[1])),
    Family.GAMMA: lambda t: AnalyticDensity.gamma(1.0 + math.exp(t[0]), rate=math.exp(t[1])),
}


def parameterization(family: str, symmetric: bool = False) -> Parameterization:
    """
    Parameterization for ``family``: ``pll<k>`` or a catalog family name.

    Raises:
        UsageError: On an unknown family, or an asymmetric catalog family when
            ``symmetric`` is requested
    """
    match = _PLL_FAMILY.match(family)
    if match:
        k = int(match.group(1))
        if k < 1:
            raise UsageError(f"PLL search families need at least one knot, got {family!r}")
        return Parameterization(family, _pll_dimension(k), _pll_builder(k, symmetric))
    try:
        fam = Family(family)
    except ValueError as e:
        raise UsageError(
            f"Unknown search family {family!r}; expected pll<k>, {CATALOG} or a catalog family"
        ) from e
    if symmetric and fam not in SYMMETRIC_FAMILIES:
        raise UsageError(f"Family {family!r} is not symmetric")
    return Parameterization(family, 2, _CATALOG_BUILDERS[fam])


# ---------------------------------------------------------------------------
# Problem and result records
# ---------------------------------------------------------------------------


class SearchProblem(BaseModel):
    """
    One tightness maximization.

    Attributes:
        tolerance: Ratios above ``1 + tolerance`` are counterexamples
        convergence_tol: Simplex stopping threshold on ratio improvement
        budget: Maximum evaluations per restart
    """

    model_config = ConfigDict(frozen=True)

    claim_id: ClaimId
    family: str
    p: Optional[str] = None
    q: Optional[str] = None
    alpha: Optional[float] = None
    budget: int = Field(default_factory=lambda: get_settings().search_budget, gt=0)
    restarts: int = Field(default_factory=lambda: get_settings().search_restarts, gt=0)
    tolerance: float = Field(default_factory=lambda: get_settings().search_tol, gt=0)
    convergence_tol: float = Field(default=1e-12, gt=0)

    @field_validator("p", "q", mode="before")
    @classmethod
    def _normalize_exponent(cls, value: Any) -> Optional[str]:
        if value is None:
            return None
        return format_exponent(as_exponent(value))

    @model_validator(mode="after")
    def _check_claim(self) -> "SearchProblem":
        if self.claim_id not in ONE_DIMENSIONAL_CLAIMS or self.claim_id in _UNSEARCHABLE:
            raise UsageError(f"Claim {self.claim_id.value} cannot be searched")
        if self.family != CATALOG:
            parameterization(self.family, self.symmetric)
        return self

    @property
    def symmetric(self) -> bool:
        return self.claim_id in SYMMETRIC_ONLY_CLAIMS

    def exponents(self) -> Tuple[Optional[Exponent], Optional[Exponent]]:
        p = None if self.p is None else parse_exponent(self.p)
        q = None if self.q is None else parse_exponent(self.q)
        return p, q


class SearchResult(BaseModel):
    """Best point of a search with its monotone trace."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    problem: SearchProblem
    seed: int
    family: str
    best_params: List[float]
    best_ratio: float
    best_restart: int
    witness: Dict[str, Any]
    trace: List[float]
    evaluations: int
    budget_exhausted: bool


@dataclass
class _RestartOutcome:
    restart: int
    params: np.ndarray
    ratio: float
    trace: List[float]
    evaluations: int
    exhausted: bool


class _Objective:
    """Tightness of one claim; each restart owns its own instance and cache."""

    def __init__(self, problem: SearchProblem, param: Parameterization) -> None:
        self.problem = problem
        self.param = param
        self.p, self.q = problem.exponents()
        self.cache: Dict[bytes, float] = {}
        self.history: List[float] = []
        self.best_value = -math.inf
        self.best_theta: Optional[np.ndarray] = None

    def density(self, theta: np.ndarray) -> DensityHandle:
        return self.param.build(np.clip(theta, -_CLIP, _CLIP))

    def verdict(self, theta: np.ndarray) -> InequalityVerdict:
        return check_claim(
            self.problem.claim_id,
            DensityProfile(self.density(theta)),
            self.p,
            self.q,
            self.problem.alpha,
        )

    def ratio(self, theta: np.ndarray) -> float:
        key = np.asarray(theta, dtype=float).tobytes()
        if key not in self.cache:
            try:
                value = self.verdict(theta).tightness
            except (DomainError, NonConvergenceError, ArithmeticError) as e:
                logger.debug(f"candidate {theta} rejected: {e}")
                value = 0.0
            if not math.isfinite(value):
                value = 0.0
            self.cache[key] = value
        value = self.cache[key]
        self.history.append(value)
        if value > self.best_value:
            self.best_value = value
            self.best_theta = np.array(theta, dtype=float)
        return value

    def __call__(self, theta: np.ndarray) -> float:
        return -self.ratio(theta)


def _run_restart(
    problem: SearchProblem, param: Parameterization, seed: int, restart: int
) -> _RestartOutcome:
    rng = np.random.default_rng(np.random.SeedSequence([seed & ((1 << 64) - 1), restart]))
    x0 = rng.normal(0.0, 1.0, size=param.dimension)
    objective = _Objective(problem, param)
    res = optimize.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxfev": problem.budget,
            "xatol": 1e-10,
            "fatol": problem.convergence_tol,
        },
    )
    if objective.best_theta is None:
        objective.ratio(res.x)
    assert objective.best_theta is not None
    params = np.clip(objective.best_theta, -_CLIP, _CLIP)
    ratio = objective.best_value
    exhausted = res.nfev >= problem.budget
    logger.debug(
        f"{param.name} restart {restart}: ratio {ratio:.12g} after {res.nfev} evaluations"
    )
    return _RestartOutcome(
        restart=restart,
        params=params,
        ratio=ratio,
        trace=list(objective.history),
        evaluations=int(res.nfev),
        exhausted=bool(exhausted),
    )


def _search_family(
    problem: SearchProblem, family: str, seed: int
) -> Tuple[_RestartOutcome, List[_RestartOutcome]]:
    param = parameterization(family, problem.symmetric)
    workers = max(1, min(get_settings().workers, problem.restarts))
    logger.info(
        f"searching {problem.claim_id.value} over {family}: "
        f"{problem.restarts} restarts, budget {problem.budget}"
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_restart, problem, param, seed, r) for r in range(problem.restarts)
        ]
        outcomes = [future.result() for future in futures]
    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.ratio > best.ratio:
            best = outcome
    return best, outcomes


def _catalog_families(problem: SearchProblem) -> List[str]:
    families = [f for f in Family if not problem.symmetric or f in SYMMETRIC_FAMILIES]
    return [f.value for f in families]


def maximize_tightness(problem: SearchProblem, seed: Optional[int] = None) -> SearchResult:
    """
    Maximize the tightness ratio of ``problem.claim_id``.

    Restarts run in parallel; the best ratio wins with ties going to the lowest
    restart index (and, for the catalog, to the earliest family). The trace is
    the running maximum over all evaluations in restart order, so identical
    ``(problem, seed)`` give identical traces.

    Raises:
        CounterexampleFound: If the best ratio exceeds ``1 + problem.tolerance``
    """
    if seed is None:
        seed = get_settings().default_seed
    families = _catalog_families(problem) if problem.family == CATALOG else [problem.family]

    champion: Optional[Tuple[str, _RestartOutcome]] = None
    history: List[float] = []
    evaluations = 0
    exhausted = False
    for family in families:
        best, outcomes = _search_family(problem, family, seed)
        for outcome in outcomes:
            history.extend(outcome.trace)
            evaluations += outcome.evaluations
            exhausted = exhausted or outcome.exhausted
        if champion is None or best.ratio > champion[1].ratio:
            champion = (family, best)
    assert champion is not None
    family, best = champion

    witness = parameterization(family, problem.symmetric).build(best.params)
    trace = np.maximum.accumulate(np.asarray(history)).tolist() if history else [best.ratio]
    result = SearchResult(
        problem=problem,
        seed=seed,
        family=family,
        best_params=best.params.tolist(),
        best_ratio=best.ratio,
        best_restart=best.restart,
        witness=witness.to_spec(),
        trace=trace,
        evaluations=evaluations,
        budget_exhausted=exhausted,
    )
    if exhausted:
        logger.warning(f"search budget exhausted on at least one restart ({problem.budget})")
    if best.ratio > 1.0 + problem.tolerance:
        raise CounterexampleFound(
            f"{problem.claim_id.value} reached tightness {best.ratio!r} on {family}",
            best.ratio,
            result.witness,
        )
    if best.ratio > 1.0:
        logger.warning(
            f"{problem.claim_id.value} tightness {best.ratio!r} is above 1 within tolerance "
            f"{problem.tolerance}; treated as rounding"
        )
    logger.info(f"best {problem.claim_id.value} tightness {best.ratio:.12g} on {family}")
    return result


def tightness_landscape(
    claim_id: ClaimId,
    density: Any,
    ps: Sequence[Optional[Exponent]] = (None,),
    qs: Sequence[Optional[Exponent]] = (None,),
    alphas: Sequence[float] = (2.0,),
) -> List[InequalityVerdict]:
    """
    Evaluate ``claim_id`` on ``density`` over the grid ``ps x qs x alphas``.

    Grid points the claim does not apply to are skipped with a warning.
    """
    profile = density if isinstance(density, DensityProfile) else DensityProfile(density)
    rows: List[InequalityVerdict] = []
    for p in ps:
        for q in qs:
            for alpha in alphas:
                try:
                    rows.append(check_claim(claim_id, profile, p, q, alpha))
                except UsageError as e:
                    logger.warning(f"skipping p={p}, q={q}, alpha={alpha}: {e}")
    return rows
