"""
Tests for the tightness search.

Budgets are kept small; the claims used here have families on which every
member is tight, so the optimum is known exactly.
"""

import numpy as np
import pytest

from lpbounds.density import PiecewiseLogLinearDensity, density_from_spec
from lpbounds.errors import CounterexampleFound, UsageError
from lpbounds.search import (
    SearchProblem,
    maximize_tightness,
    parameterization,
    tightness_landscape,
)
from lpbounds.verdicts import ClaimId, make_verdict


def small(claim, family, **kwargs) -> SearchProblem:
    return SearchProblem(claim_id=claim, family=family, budget=40, restarts=2, **kwargs)


def test_pll_parameterization_builds_valid_densities():
    """Any coordinate vector maps to a normalized log-concave density."""
    param = parameterization("pll4")
    assert param.dimension == 9
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = param.build(rng.normal(0.0, 2.0, size=param.dimension))
        assert isinstance(f, PiecewiseLogLinearDensity)
        assert len(f.knots) == 4
        assert f.log_mass() == pytest.approx(0.0, abs=1e-10)


def test_one_knot_parameterization_has_no_unused_coordinate():
    """pll1 is fixed by its two tail slopes; every coordinate moves the density."""
    param = parameterization("pll1")
    assert param.dimension == 2
    base = param.build(np.zeros(2))
    for i in range(2):
        theta = np.zeros(2)
        theta[i] = 0.5
        moved = param.build(theta).mode_and_supnorm()[1]
        assert moved != pytest.approx(base.mode_and_supnorm()[1], rel=1e-6)
    assert parameterization("pll2").dimension == 5


def test_symmetric_parameterization():
    """Symmetric searches build symmetric densities and refuse asymmetric families."""
    f = parameterization("pll3", symmetric=True).build(np.zeros(7))
    assert f.symmetric
    with pytest.raises(UsageError, match="not symmetric"):
        parameterization("exponential", symmetric=True)


def test_unknown_family():
    """Only pll<k> and catalog family names are accepted."""
    with pytest.raises(UsageError, match="Unknown search family"):
        parameterization("cauchy")
    with pytest.raises(UsageError):
        parameterization("pll0")


def test_problem_validation():
    """Claims that cannot be searched are rejected."""
    with pytest.raises(ValueError, match="cannot be searched"):
        SearchProblem(claim_id=ClaimId.FINITE_MEASURE, family="pll2")
    with pytest.raises(ValueError, match="cannot be searched"):
        SearchProblem(claim_id=ClaimId.THEOREM2, family="pll2")
    problem = SearchProblem(claim_id=ClaimId.THEOREM1, family="pll2", p="inf", q=1)
    assert problem.p == "inf"
    assert problem.q == "1.0"


def test_lemma4_one_knot_pll_is_tight():
    """Every two-sided exponential attains ||f||_inf = 2 ||f||_2^2."""
    result = maximize_tightness(small(ClaimId.LEMMA4, "pll1"), seed=1)
    assert result.best_ratio == pytest.approx(1.0, abs=1e-9)
    assert result.family == "pll1"


def test_corollary2_upper_gaussian_is_tight():
    """The entropy upper bound at alpha = 2 is an equality for every Gaussian."""
    result = maximize_tightness(small(ClaimId.COROLLARY2_UPPER, "gaussian", alpha=2.0), seed=3)
    assert abs(result.best_ratio - 1.0) <= 1e-8


def test_lemma5_tightened_exponential_is_tight():
    """||f||_inf sigma = 1 for every exponential."""
    result = maximize_tightness(small(ClaimId.LEMMA5_TIGHTENED, "exponential"), seed=5)
    assert result.best_ratio == pytest.approx(1.0, abs=1e-9)
    witness = density_from_spec(result.witness)
    assert witness.family.value == "exponential"


def test_search_is_reproducible():
    """Same problem and seed give the same trace and witness."""
    problem = small(ClaimId.LEMMA3, "pll2", p=2.0)
    first = maximize_tightness(problem, seed=7)
    second = maximize_tightness(problem, seed=7)
    assert first.trace == second.trace
    assert first.best_params == second.best_params
    assert first.trace == sorted(first.trace)
    assert first.evaluations > 0


@pytest.mark.slow
def test_catalog_search_over_symmetric_families():
    """Catalog searches for symmetric-only claims visit symmetric families only."""
    problem = SearchProblem(
        claim_id=ClaimId.SYMMETRIC_DENSITY_BOUND,
        family="catalog",
        alpha=2.0,
        budget=30,
        restarts=1,
    )
    result = maximize_tightness(problem, seed=0)
    assert result.family in {"gaussian", "laplace", "uniform", "logistic"}
    assert result.best_ratio <= 1.0 + 1e-9


def test_counterexample_is_raised(monkeypatch):
    """A ratio above 1 + tolerance raises with the witness attached."""

    def fake_check(claim, f, p=None, q=None, alpha=None):
        return make_verdict(claim, 2.0, 1.0, exact=True, density=f)

    monkeypatch.setattr("lpbounds.search.check_claim", fake_check)
    with pytest.raises(CounterexampleFound) as info:
        maximize_tightness(small(ClaimId.LEMMA4, "pll1"), seed=0)
    assert info.value.ratio == pytest.approx(2.0)
    assert "pll" in info.value.witness


def test_tightness_landscape_grid(pll_laplace):
    """One verdict per grid point; inapplicable points are skipped."""
    rows = tightness_landscape(
        ClaimId.THEOREM1, pll_laplace, ps=[1.0, 2.0, "inf"], qs=[1.0, 2.0, "inf"]
    )
    assert len(rows) == 9
    assert all(v.holds for v in rows)
    assert tightness_landscape(ClaimId.THEOREM1, pll_laplace) == []
