"""
Sweep Runner

Runs the inequality checkers over a set of densities. Each density is one task
that moves through queued -> in-progress -> completed/failed; tasks may run in
a process pool, and their verdicts are merged in a scheduling-independent
order.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from enum import Enum
from functools import partial
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from lpbounds.config import get_settings
from lpbounds.density import standard_catalog
from lpbounds.errors import LpBoundsError, NonConvergenceError
from lpbounds.exponents import INF, Exponent, as_exponent, format_exponent, parse_exponent
from lpbounds.functionals import DensityProfile
from lpbounds.generator import GeneratorConfig, generate_batch
from lpbounds.inequalities import ONE_DIMENSIONAL_CLAIMS, SYMMETRIC_ONLY_CLAIMS, check_claim
from lpbounds.multivariate import (
    MultivariateDensity,
    check_lemma2,
    check_lemma4_nd,
    check_lemma6,
    check_lemma6_square_bound,
    check_symmetric_density_bound_nd,
    check_theorem2,
)
from lpbounds.verdicts import (
    MULTIVARIATE_CLAIMS,
    ClaimId,
    InequalityVerdict,
    merge_verdicts,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_NONCONVERGENCE = 3
EXIT_COUNTEREXAMPLE = 4

DEFAULT_EXPONENTS = ("1", "1.5", "2", "3", "8", "64", "inf")
DEFAULT_ALPHAS = (1.0, 1.5, 2.0, 3.0, 4.0)
DEFAULT_INTERVAL_MULTIPLIERS = (0.25, 0.5, 1.0, 2.0, 4.0)

DEFAULT_CLAIMS = (
    ClaimId.THEOREM1,
    ClaimId.THEOREM1_TIGHTENED,
    ClaimId.COROLLARY1_LOWER,
    ClaimId.COROLLARY1_UPPER,
    ClaimId.COROLLARY2_LOWER,
    ClaimId.COROLLARY2_UPPER,
    ClaimId.PROPOSITION1,
    ClaimId.LEMMA1,
    ClaimId.LEMMA3,
    ClaimId.LEMMA4,
    ClaimId.LEMMA5,
    ClaimId.LEMMA5_TIGHTENED,
    ClaimId.SYMMETRIC_DENSITY_BOUND,
    ClaimId.FINITE_MEASURE,
)

CLAIM_GROUPS: Dict[str, Tuple[ClaimId, ...]] = {
    "default": DEFAULT_CLAIMS,
    "all-1d": ONE_DIMENSIONAL_CLAIMS,
    "all-nd": tuple(c for c in ClaimId if c in MULTIVARIATE_CLAIMS),
    "all": tuple(ClaimId),
}

# Claims whose hypotheses ask for a finite moment only, not log-concavity.
ANY_DENSITY_CLAIMS = frozenset({ClaimId.LEMMA1, ClaimId.FINITE_MEASURE, ClaimId.LEMMA2})


def parse_claims(tokens: Iterable[str]) -> List[ClaimId]:
    """
    Expand claim ids and group names into a de-duplicated, ordered list.

    Raises:
        ValueError: On an unknown token
    """
    chosen = set()
    for token in tokens:
        for part in token.split(","):
            part = part.strip()
            if not part:
                continue
            if part in CLAIM_GROUPS:
                chosen.update(CLAIM_GROUPS[part])
                continue
            try:
                chosen.add(ClaimId(part))
            except ValueError as e:
                known = ", ".join(list(CLAIM_GROUPS) + [c.value for c in ClaimId])
                raise ValueError(f"Unknown claim {part!r}; expected one of {known}") from e
    return sorted(chosen, key=lambda c: c.order)


class SweepGrid(BaseModel):
    """Parameter grid and claim selection applied to every density."""

    model_config = ConfigDict(frozen=True)

    ps: List[str] = Field(default_factory=lambda: list(DEFAULT_EXPONENTS))
    qs: List[str] = Field(default_factory=lambda: list(DEFAULT_EXPONENTS))
    alphas: List[float] = Field(default_factory=lambda: list(DEFAULT_ALPHAS))
    claims: List[ClaimId] = Field(default_factory=lambda: list(DEFAULT_CLAIMS))
    interval_multipliers: List[float] = Field(
        default_factory=lambda: list(DEFAULT_INTERVAL_MULTIPLIERS)
    )

    @field_validator("ps", "qs", mode="before")
    @classmethod
    def _normalize_exponents(cls, values: Any) -> List[str]:
        return [format_exponent(as_exponent(v)) for v in values]

    def exponents(self, which: str) -> List[Exponent]:
        return [parse_exponent(v) for v in getattr(self, which)]


class CheckFailure(BaseModel):
    """One check that raised instead of returning a verdict."""

    claim_id: ClaimId
    p: Optional[str] = None
    q: Optional[str] = None
    alpha: Optional[float] = None
    error_type: str
    message: str

    def describe(self) -> str:
        args = [f"{k}={v}" for k, v in (("p", self.p), ("q", self.q), ("alpha", self.alpha))]
        shown = ", ".join(a for a in args if not a.endswith("=None"))
        return f"{self.claim_id.value}({shown})"


class TaskStatus(str, Enum):
    """Task status enum"""

    QUEUED = "queued"
    IN_PROGRESS = "in-progress"
    COMPLETED = "completed"
    FAILED = "failed"


class SweepTask:
    """All checks for one density."""

    def __init__(self, id: int, name: str, density: Any, scope: bool = False):
        self.id = id
        self.name = name
        self.density = density
        self.scope = scope
        self.status = TaskStatus.QUEUED
        self.verdicts: List[InequalityVerdict] = []
        self.check_failures: List[CheckFailure] = []
        self.error: Optional[str] = None
        self.error_type: Optional[str] = None
        self.duration: Optional[float] = None
        self.queued_at = datetime.now(timezone.utc)
        self.status_history: List[Dict[str, Any]] = []
        self._add_history_entry(TaskStatus.QUEUED, "Task queued")

    def _add_history_entry(self, status: TaskStatus, message: str) -> None:
        self.status_history.append(
            {
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "status": status.value,
                "message": message,
            }
        )

    def update_status(self, status: TaskStatus, message: Optional[str] = None) -> None:
        self.status = status
        if message:
            self._add_history_entry(status, message)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "scope": self.scope,
            "status": self.status.value,
            "verdicts": len(self.verdicts),
            "checkFailures": len(self.check_failures),
            "error": self.error,
            "errorType": self.error_type,
            "duration": self.duration,
            "statusHistory": self.status_history,
        }


class TaskFailure(BaseModel):
    task_id: int
    name: str
    scope: bool = False
    error_type: str
    message: str
    claim_id: Optional[ClaimId] = None
    p: Optional[str] = None
    q: Optional[str] = None
    alpha: Optional[float] = None

    def describe(self) -> str:
        if self.claim_id is None:
            return self.name
        args = [f"{k}={v}" for k, v in (("p", self.p), ("q", self.q), ("alpha", self.alpha))]
        shown = ", ".join(a for a in args if not a.endswith("=None"))
        return f"{self.name}: {self.claim_id.value}({shown})"


class SweepReport(BaseModel):
    """Merged outcome of a sweep."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    verdicts: List[InequalityVerdict] = Field(default_factory=list)
    scope_verdicts: List[InequalityVerdict] = Field(default_factory=list)
    failures: List[TaskFailure] = Field(default_factory=list)
    tasks: List[Dict[str, Any]] = Field(default_factory=list)

    @property
    def violations(self) -> List[InequalityVerdict]:
        """
        Failed verdicts within the stated parameter ranges.

        Out-of-scope fixtures count only for the claims that do not need
        log-concavity.
        """
        scoped = [v for v in self.scope_verdicts if v.claim_id in ANY_DENSITY_CLAIMS]
        return [v for v in self.verdicts + scoped if not v.holds and v.in_theorem_range]

    @property
    def exit_code(self) -> int:
        """0 if all hold, 2 on any violation, 3 on non-convergence, 1 on other failures."""
        if self.violations:
            return EXIT_VIOLATION
        failures = [f for f in self.failures if not f.scope]
        if any(f.error_type == NonConvergenceError.__name__ for f in failures):
            return EXIT_NONCONVERGENCE
        if failures:
            return EXIT_USAGE
        return EXIT_OK

    def max_tightness(self) -> float:
        return max((v.tightness for v in self.verdicts), default=0.0)


# ---------------------------------------------------------------------------
# Per-density checks (module level so process pools can pickle them)
# ---------------------------------------------------------------------------


def _intervals(
    profile: DensityProfile, multipliers: Sequence[float]
) -> List[Tuple[float, float]]:
    m = profile.mean().value
    s = profile.sigma_alpha(2.0).value
    return [(m - k * s, m + k * s) for k in multipliers]


def _attempt(
    out: List[InequalityVerdict],
    failures: Optional[List[CheckFailure]],
    claim: ClaimId,
    call: Callable[[], InequalityVerdict],
    p: Optional[Exponent] = None,
    q: Optional[Exponent] = None,
    alpha: Optional[float] = None,
) -> None:
    """Run one check; with a ``failures`` list, record errors there and carry on."""
    try:
        out.append(call())
    except LpBoundsError as e:
        if failures is None:
            raise
        _record_failure(failures, claim, e, p, q, alpha)


def _record_failure(
    failures: List[CheckFailure],
    claim: ClaimId,
    e: LpBoundsError,
    p: Optional[Exponent] = None,
    q: Optional[Exponent] = None,
    alpha: Optional[float] = None,
) -> None:
    failure = CheckFailure(
        claim_id=claim,
        p=None if p is None else format_exponent(p),
        q=None if q is None else format_exponent(q),
        alpha=alpha,
        error_type=type(e).__name__,
        message=str(e),
    )
    logger.warning(f"Check {failure.describe()} failed: {failure.error_type}: {e}")
    failures.append(failure)


def _one_dimensional_calls(
    claim: ClaimId, profile: DensityProfile, grid: SweepGrid
) -> Iterator[Tuple[Optional[Exponent], Optional[Exponent], Optional[float], Dict[str, Any]]]:
    """(p, q, alpha, extra kwargs) for every grid point ``claim`` is checked at."""
    ps, qs, alphas = grid.exponents("ps"), grid.exponents("qs"), grid.alphas
    if claim is ClaimId.THEOREM1_TIGHTENED:
        yield from ((p, q, None, {}) for p in ps for q in qs)
    elif claim in (
        ClaimId.THEOREM1,
        ClaimId.THEOREM1_SUPNORM_FORM,
        ClaimId.COROLLARY1_LOWER,
        ClaimId.COROLLARY1_UPPER,
        ClaimId.PROPOSITION1,
    ):
        yield from ((p, q, a, {}) for p in ps for q in qs for a in alphas)
    elif claim in (ClaimId.RENYI_LOWER, ClaimId.RENYI_UPPER):
        yield from ((p, None, a, {}) for p in ps if p is INF or float(p) > 1.0 for a in alphas)
    elif claim in (ClaimId.LEMMA1_INTERMEDIATE_LOWER, ClaimId.LEMMA1_INTERMEDIATE_UPPER):
        yield from (
            (p, None, a, {}) for p in ps if p is not INF and float(p) > 1.0 for a in alphas
        )
    elif claim is ClaimId.LEMMA1:
        yield from ((p, None, a, {}) for p in ps for a in alphas)
    elif claim is ClaimId.LEMMA3:
        yield from ((p, None, None, {}) for p in ps)
    elif claim in (ClaimId.LEMMA4, ClaimId.LEMMA5_TIGHTENED):
        yield None, None, None, {}
    elif claim is ClaimId.FINITE_MEASURE:
        for interval in _intervals(profile, grid.interval_multipliers):
            yield from (
                (p, q, None, {"interval": interval})
                for p in ps
                for q in qs
                if _exponent_le(p, q)
            )
    else:
        yield from ((None, None, a, {}) for a in alphas)


def _one_dimensional_checks(
    density: Any,
    grid: SweepGrid,
    scope: bool = False,
    failures: Optional[List[CheckFailure]] = None,
) -> List[InequalityVerdict]:
    profile = DensityProfile(density)
    log_concave = bool(getattr(density, "is_log_concave", False))
    symmetric = profile.symmetric
    out: List[InequalityVerdict] = []
    for claim in grid.claims:
        if claim.is_multivariate:
            continue
        if not (log_concave or scope or claim in ANY_DENSITY_CLAIMS):
            continue
        if claim in SYMMETRIC_ONLY_CLAIMS and not symmetric:
            continue
        try:
            calls = list(_one_dimensional_calls(claim, profile, grid))
        except LpBoundsError as e:
            # Finite-measure intervals need the mean and sigma of the density.
            if failures is None:
                raise
            _record_failure(failures, claim, e)
            continue
        for p, q, a, extra in calls:
            check = partial(check_claim, claim, profile, p, q, a, **extra)
            _attempt(out, failures, claim, check, p, q, a)
    return out


def _exponent_le(p: Exponent, q: Exponent) -> bool:
    return (math.inf if p is INF else float(p)) <= (math.inf if q is INF else float(q))


def _multivariate_checks(
    big_f: MultivariateDensity,
    grid: SweepGrid,
    failures: Optional[List[CheckFailure]] = None,
) -> List[InequalityVerdict]:
    ps, qs = grid.exponents("ps"), grid.exponents("qs")
    out: List[InequalityVerdict] = []
    claims = set(grid.claims)
    log_concave = big_f.is_log_concave
    if ClaimId.THEOREM2 in claims and log_concave:
        for p in ps:
            for q in qs:
                _attempt(
                    out, failures, ClaimId.THEOREM2, partial(check_theorem2, big_f, p, q), p, q
                )
    if ClaimId.LEMMA2 in claims:
        for p in ps:
            _attempt(out, failures, ClaimId.LEMMA2, partial(check_lemma2, big_f, p), p)
    if ClaimId.LEMMA4_ND in claims and log_concave:
        _attempt(out, failures, ClaimId.LEMMA4_ND, partial(check_lemma4_nd, big_f))
    if ClaimId.LEMMA6 in claims and log_concave:
        _attempt(out, failures, ClaimId.LEMMA6, partial(check_lemma6, big_f))
    if ClaimId.LEMMA6_SQUARE in claims and log_concave:
        _attempt(out, failures, ClaimId.LEMMA6_SQUARE, partial(check_lemma6_square_bound, big_f))
    if ClaimId.SYMMETRIC_DENSITY_BOUND_ND in claims and log_concave and big_f.symmetric:
        _attempt(
            out,
            failures,
            ClaimId.SYMMETRIC_DENSITY_BOUND_ND,
            partial(check_symmetric_density_bound_nd, big_f),
        )
    return out


def run_density_checks(
    density: Any,
    grid: SweepGrid,
    scope: bool = False,
    failures: Optional[List[CheckFailure]] = None,
) -> List[InequalityVerdict]:
    """
    Every grid check that applies to ``density``.

    Claims that need log-concavity are skipped on other densities unless
    ``scope`` asks for them to be recorded anyway.

    Args:
        failures: When given, a check that raises is appended here and the
            remaining checks still run; otherwise the first error propagates
    """
    if isinstance(density, MultivariateDensity):
        return _multivariate_checks(density, grid, failures)
    return _one_dimensional_checks(density, grid, scope, failures)


TaskResult = Tuple[
    int, List[InequalityVerdict], List[CheckFailure], Optional[str], Optional[str], float
]


def _run_task(task_id: int, density: Any, grid: SweepGrid, scope: bool = False) -> TaskResult:
    start = time.perf_counter()
    failures: List[CheckFailure] = []
    try:
        verdicts = run_density_checks(density, grid, scope, failures=failures)
    except LpBoundsError as e:
        return task_id, [], failures, type(e).__name__, str(e), time.perf_counter() - start
    return task_id, verdicts, failures, None, None, time.perf_counter() - start



class SweepRunner:
    """
    Queues densities and runs their checks.

    Args:
        grid: Grid applied to every density
        workers: Process count; 1 runs in-process (default from settings)
    """

    def __init__(self, grid: Optional[SweepGrid] = None, workers: Optional[int] = None):
        self.grid = grid or SweepGrid()
        self.workers = workers if workers is not None else get_settings().workers
        self.tasks: Dict[int, SweepTask] = {}
        self.task_id_counter = 0

    def queue(self, density: Any, name: Optional[str] = None, scope: bool = False) -> int:
        """
        Queue a density.

        Args:
            density: 1-D density or :class:`MultivariateDensity`
            name: Display name, defaults to the density's description
            scope: Record the verdicts as out-of-scope observations

        Returns:
            Task ID
        """
        self.task_id_counter += 1
        task = SweepTask(
            id=self.task_id_counter,
            name=name or density.describe(),
            density=density,
            scope=scope,
        )
        self.tasks[task.id] = task
        logger.debug(f"Task {task.id} queued: {task.name}")
        return task.id

    def queue_many(self, densities: Iterable[Any], scope: bool = False) -> List[int]:
        return [self.queue(d, scope=scope) for d in densities]

    def _finish(
        self,
        task: SweepTask,
        verdicts: List[InequalityVerdict],
        check_failures: List[CheckFailure],
        error_type: Optional[str],
        error: Optional[str],
        duration: float,
    ) -> None:
        task.duration = duration
        task.verdicts = verdicts
        task.check_failures = check_failures
        if error_type is not None:
            task.error, task.error_type = error, error_type
            task.update_status(TaskStatus.FAILED, f"Task failed: {error}")
            logger.error(f"Task {task.id} failed: {task.name}")
            logger.error(f"  Error: {error_type}: {error}")
        elif check_failures:
            task.update_status(
                TaskStatus.FAILED,
                f"{len(check_failures)} check(s) failed, {len(verdicts)} verdicts kept",
            )
            logger.error(
                f"Task {task.id} finished with {len(check_failures)} failed check(s): "
                f"{task.name}"
            )
        else:
            task.update_status(TaskStatus.COMPLETED, "Task completed successfully")
            logger.info(
                f"Task {task.id} completed: {task.name}, {len(verdicts)} verdicts "
                f"in {duration:.2f}s"
            )

    def run(self) -> SweepReport:
        """Run every queued task and merge the results."""
        pending = [t for t in self.tasks.values() if t.status == TaskStatus.QUEUED]
        logger.info(f"Running {len(pending)} tasks with {self.workers} worker(s)")
        for task in pending:
            task.update_status(TaskStatus.IN_PROGRESS, "Task started")
        if self.workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                futures = [
                    pool.submit(_run_task, t.id, t.density, self.grid, t.scope) for t in pending
                ]
                results = [future.result() for future in futures]
        else:
            results = [_run_task(t.id, t.density, self.grid, t.scope) for t in pending]
        for task_id, verdicts, check_failures, error_type, error, duration in results:
            self._finish(
                self.tasks[task_id], verdicts, check_failures, error_type, error, duration
            )
        return self.report()

    def report(self) -> SweepReport:
        tasks = sorted(self.tasks.values(), key=lambda t: t.id)
        failures: List[TaskFailure] = []
        for t in tasks:
            failures.extend(
                TaskFailure(
                    task_id=t.id,
                    name=t.name,
                    scope=t.scope,
                    error_type=c.error_type,
                    message=c.message,
                    claim_id=c.claim_id,
                    p=c.p,
                    q=c.q,
                    alpha=c.alpha,
                )
                for c in t.check_failures
            )
            if t.error_type is not None:
                failures.append(
                    TaskFailure(
                        task_id=t.id,
                        name=t.name,
                        scope=t.scope,
                        error_type=t.error_type,
                        message=t.error or "",
                    )
                )
        report = SweepReport(
            verdicts=merge_verdicts(*(t.verdicts for t in tasks if not t.scope)),
            scope_verdicts=merge_verdicts(*(t.verdicts for t in tasks if t.scope)),
            failures=failures,
            tasks=[t.to_dict() for t in tasks],
        )
        logger.info(
            f"Sweep finished: {len(report.verdicts)} verdicts, "
            f"{len(report.violations)} violations, {len(failures)} failures"
        )
        return report


def sweep_densities(
    count: int = 1000,
    config: Optional[GeneratorConfig] = None,
    include_catalog: bool = True,
) -> List[Any]:
    """The standard catalog followed by ``count`` generated densities."""
    densities: List[Any] = list(standard_catalog()) if include_catalog else []
    densities.extend(generate_batch(config or GeneratorConfig(), count))
    return densities


def run_sweep(
    densities: Iterable[Any],
    grid: Optional[SweepGrid] = None,
    workers: Optional[int] = None,
    scope_densities: Iterable[Any] = (),
) -> SweepReport:
    """Queue ``densities`` (and optional out-of-scope fixtures) and run them."""
    runner = SweepRunner(grid, workers)
    runner.queue_many(densities)
    runner.queue_many(scope_densities, scope=True)
    return runner.run()
