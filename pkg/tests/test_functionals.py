"""
Tests for norms, moments and entropies of one-dimensional densities.

Exact paths are cross-checked against forced adaptive quadrature and against
the midpoint oracle, which share no code with each other.
"""

import math
import threading

import pytest

from lpbounds.density import AnalyticDensity, standard_catalog
from lpbounds.errors import DomainError
from lpbounds.exponents import INF
from lpbounds.functionals import (
    DensityProfile,
    FunctionalMethod,
    diff_entropy,
    lp_norm,
    mean,
    oracle_diff_entropy,
    oracle_lp_norm,
    oracle_sigma_alpha,
    renyi_entropy,
    restricted_lp_norm,
    sigma_alpha,
)
from lpbounds.scope import bimodal_mixture

ADAPTIVE = FunctionalMethod.ADAPTIVE


def test_lp_norm_gaussian_closed_form(gaussian):
    """||N(0, 1)||_2 = (4 pi)^(-1/4)."""
    value = lp_norm(gaussian, 2.0)
    assert value.method is FunctionalMethod.CLOSED_FORM
    assert value.value == pytest.approx(0.5311259661, rel=1e-10)


def test_lp_norm_exponential_and_uniform(exponential):
    """||Exp(1)||_2 = 2^(-1/2) and every norm of U(0, 1) is 1."""
    assert lp_norm(exponential, 2.0).value == pytest.approx(0.7071067812, rel=1e-10)
    assert lp_norm(AnalyticDensity.uniform(0.0, 1.0), 7.0).value == pytest.approx(1.0)


def test_lp_norm_endpoints(gaussian):
    """p = 1 is exactly 1 and p = inf is the sup-norm."""
    one = lp_norm(gaussian, 1.0)
    assert one.value == 1.0
    assert one.error_estimate == 0.0
    assert lp_norm(gaussian, INF).value == pytest.approx(0.3989422804, rel=1e-10)


def test_lp_norm_rejects_small_p(gaussian):
    """p < 1 is not a norm exponent."""
    with pytest.raises(DomainError):
        lp_norm(gaussian, 0.5)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 8.0, 64.0])
def test_lp_norm_exact_matches_adaptive(p):
    """Closed forms and quadrature agree on every catalog member."""
    for f in standard_catalog():
        exact = lp_norm(f, p).value
        adaptive = lp_norm(f, p, method=ADAPTIVE).value
        assert adaptive == pytest.approx(exact, rel=1e-8), f.describe()


def test_lp_norm_pll_segments(pll_laplace):
    """||Laplace(0, 1)||_3 = (1/12)^(1/3) by exact segment integrals."""
    value = lp_norm(pll_laplace, 3.0)
    assert value.method is FunctionalMethod.EXACT_SEGMENT
    assert value.value == pytest.approx(0.4367902324, rel=1e-10)
    assert lp_norm(pll_laplace, 3.0, method=ADAPTIVE).value == pytest.approx(
        value.value, rel=1e-9
    )


def test_method_must_be_available(pll_laplace):
    """Closed forms are not offered for PLL densities."""
    with pytest.raises(DomainError):
        lp_norm(pll_laplace, 2.0, method=FunctionalMethod.CLOSED_FORM)


def test_oracle_agrees_with_exact(gaussian, pll_laplace):
    """The midpoint oracle reproduces exact norms, moments and entropies."""
    for f in (gaussian, pll_laplace, AnalyticDensity.gamma(3.0, rate=2.0)):
        assert oracle_lp_norm(f, 2.0) == pytest.approx(lp_norm(f, 2.0).value, rel=1e-6)
        assert oracle_sigma_alpha(f, 2.0) == pytest.approx(
            sigma_alpha(f, 2.0).value, rel=1e-6
        )
        assert oracle_diff_entropy(f) == pytest.approx(
            diff_entropy(f).value, rel=1e-6
        )


def test_oracle_finds_mass_far_from_origin():
    """Densities centred far from 0 are not clipped away by the oracle."""
    for f in (AnalyticDensity.gaussian(40.0, 1.0), AnalyticDensity.laplace(-60.0, 1.0)):
        assert oracle_lp_norm(f, 2.0, 20_000) == pytest.approx(
            lp_norm(f, 2.0).value, rel=1e-6
        )
        assert oracle_sigma_alpha(f, 2.0, 20_000) == pytest.approx(
            sigma_alpha(f, 2.0).value, rel=1e-6
        )
        assert oracle_diff_entropy(f, 20_000) == pytest.approx(
            diff_entropy(f).value, rel=1e-6
        )
    assert oracle_lp_norm(AnalyticDensity.gaussian(40.0, 1.0), 2.0, 20_000) == pytest.approx(
        0.5311259660, rel=1e-8
    )


def test_sigma_alpha_known_values(gaussian):
    """sigma_1 of N(0, 1) is sqrt(2/pi); sigma_2 of U(0, 1) is 1/sqrt(12)."""
    assert sigma_alpha(gaussian, 1.0).value == pytest.approx(0.7978845608, rel=1e-10)
    uniform = AnalyticDensity.uniform(0.0, 1.0)
    assert sigma_alpha(uniform, 2.0).value == pytest.approx(0.2886751346, rel=1e-10)


def test_sigma_alpha_adaptive_for_other_orders(gaussian):
    """alpha = 3 has no closed form and uses quadrature: (2 sqrt(2/pi))^(1/3)."""
    value = sigma_alpha(gaussian, 3.0)
    assert value.method is ADAPTIVE
    assert value.value == pytest.approx(1.1685752550, rel=1e-9)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_sigma_alpha_exact_matches_adaptive(alpha, pll_laplace):
    """Exact sigma_1 and sigma_2 agree with quadrature."""
    for f in [*standard_catalog(), pll_laplace]:
        exact = sigma_alpha(f, alpha).value
        adaptive = sigma_alpha(f, alpha, method=ADAPTIVE).value
        assert adaptive == pytest.approx(exact, rel=1e-8), f.describe()


def test_sigma_alpha_below_one_warns(gaussian, caplog):
    """alpha < 1 is computed and logged as outside the theorem range."""
    with caplog.at_level("WARNING", logger="lpbounds"):
        value = sigma_alpha(gaussian, 0.5)
    assert value.value > 0
    assert "outside the stated theorem range" in caplog.text


def test_sigma_alpha_rejects_non_positive(gaussian):
    """alpha <= 0 is a domain error."""
    with pytest.raises(DomainError):
        sigma_alpha(gaussian, 0.0)


def test_mean_exact_and_adaptive():
    """Means of shifted members, exact and by quadrature."""
    f = AnalyticDensity.gamma(3.0, rate=2.0, loc=-1.0)
    assert mean(f).value == pytest.approx(0.5)
    assert mean(f, method=ADAPTIVE).value == pytest.approx(0.5, rel=1e-9)


def test_entropies(gaussian, exponential):
    """h(N(0, 1)) = log(2 pi e)/2 and h(Exp(1)) = 1."""
    assert diff_entropy(gaussian).value == pytest.approx(1.4189385332, rel=1e-10)
    assert diff_entropy(exponential).value == pytest.approx(1.0, rel=1e-12)
    assert diff_entropy(exponential, method=ADAPTIVE).value == pytest.approx(1.0, rel=1e-9)


def test_renyi_entropy(gaussian):
    """h_2(N(0, 1)) = log(2 sqrt(pi)) and h_inf = -log ||f||_inf."""
    assert renyi_entropy(gaussian, 2.0).value == pytest.approx(1.2655121235, rel=1e-10)
    assert renyi_entropy(gaussian, INF).value == pytest.approx(
        0.5 * math.log(2.0 * math.pi), rel=1e-12
    )


def test_renyi_entropy_is_decreasing_in_p(pll_laplace):
    """h_p decreases with p and stays below the Shannon entropy."""
    values = [renyi_entropy(pll_laplace, p).value for p in (1.5, 2.0, 4.0, INF)]
    assert values == sorted(values, reverse=True)
    assert values[0] < diff_entropy(pll_laplace).value


def test_renyi_entropy_rejects_p_one(gaussian):
    """p = 1 is the Shannon entropy and must be asked for as such."""
    with pytest.raises(DomainError, match="diff_entropy"):
        renyi_entropy(gaussian, 1.0)


def test_restricted_lp_norm():
    """Restricting U(0, 1) to [0, 1/2] halves the mass."""
    f = AnalyticDensity.uniform(0.0, 1.0)
    assert restricted_lp_norm(f, 2.0, (0.0, 0.5)).value == pytest.approx(math.sqrt(0.5))
    assert restricted_lp_norm(f, INF, (0.0, 0.5)).value == pytest.approx(1.0)
    assert restricted_lp_norm(f, 2.0, (2.0, 3.0)).value == 0.0


def test_restricted_lp_norm_pll_exact(pll_laplace):
    """On [0, inf) restricted to [0, 1]: int_0^1 (e^-x / 2)^2 = (1 - e^-2)/8."""
    value = restricted_lp_norm(pll_laplace, 2.0, (0.0, 1.0))
    assert value.method is FunctionalMethod.EXACT_SEGMENT
    assert value.value == pytest.approx(math.sqrt((1.0 - math.exp(-2.0)) / 8.0), rel=1e-12)


def test_restricted_lp_norm_needs_finite_interval(gaussian):
    """Unbounded or reversed intervals are rejected."""
    with pytest.raises(DomainError):
        restricted_lp_norm(gaussian, 2.0, (0.0, math.inf))
    with pytest.raises(DomainError):
        restricted_lp_norm(gaussian, 2.0, (1.0, 0.0))


def test_non_log_concave_density_uses_quadrature():
    """Mixtures go through the adaptive path and agree with the oracle."""
    f = bimodal_mixture(3.0)
    value = lp_norm(f, 2.0)
    assert value.method is ADAPTIVE
    assert oracle_lp_norm(f, 2.0) == pytest.approx(value.value, rel=1e-6)


def test_profile_memoizes(gaussian):
    """Each functional is computed once per profile."""
    profile = DensityProfile(gaussian)
    first = profile.lp_norm(2.0)
    assert profile.lp_norm(2) is first
    assert ("lp", 2.0) in profile.cached_keys()
    assert profile.supnorm().value == pytest.approx(0.3989422804, rel=1e-10)


def test_profile_is_thread_safe(pll_laplace):
    """Concurrent readers all see the single cached value."""
    profile = DensityProfile(pll_laplace)
    seen = []

    def work() -> None:
        seen.append(profile.sigma_alpha(3.0))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(v is seen[0] for v in seen)
