"""
Tests for the integration routines.
"""

import math

import numpy as np
import pytest

from lpbounds.errors import DomainError, NonConvergenceError
from lpbounds.quadrature import (
    IntegralResult,
    IntegrationMethod,
    adaptive_integrate,
    adaptive_integrate_exp,
    exact_exp_affine_integral,
    local_moments,
    log_exp_affine_integral,
    riemann_oracle,
)


def test_exact_affine_integral():
    """int_0^1 exp(1 - 2x) dx = sinh(1)."""
    assert exact_exp_affine_integral(1.0, -2.0, 0.0, 1.0) == pytest.approx(
        1.1752011936, rel=1e-10
    )


def test_exact_affine_integral_tails():
    """Half-infinite segments with a decaying slope integrate to exp(a + b x0)/|b|."""
    assert exact_exp_affine_integral(0.0, -1.0, 0.0, math.inf) == pytest.approx(1.0)
    assert exact_exp_affine_integral(0.0, 2.0, -math.inf, 0.0) == pytest.approx(0.5)


def test_exact_affine_integral_zero_slope_and_empty_segment():
    """b = 0 gives width * exp(a); an empty segment has log mass -inf."""
    assert exact_exp_affine_integral(math.log(3.0), 0.0, 1.0, 3.0) == pytest.approx(6.0)
    assert log_exp_affine_integral(0.0, 1.0, 2.0, 2.0) == -math.inf


def test_exact_affine_integral_divergent():
    """A tail that does not decay is a domain error."""
    with pytest.raises(DomainError):
        exact_exp_affine_integral(0.0, 1.0, 0.0, math.inf)
    with pytest.raises(DomainError):
        exact_exp_affine_integral(0.0, 0.0, -math.inf, 0.0)


def test_exact_affine_integral_no_overflow():
    """Huge exponents stay finite in log space."""
    value = log_exp_affine_integral(0.0, 800.0, 0.0, 1.0)
    assert value == pytest.approx(800.0 - math.log(800.0), rel=1e-12)


def test_local_moments_small_slope_series():
    """Near-zero slopes use the series and agree with the polynomial limit."""
    j0, j1, j2 = local_moments(-1e-9, 2.0)
    assert j0 == pytest.approx(2.0, rel=1e-8)
    assert j1 == pytest.approx(2.0, rel=1e-8)
    assert j2 == pytest.approx(8.0 / 3.0, rel=1e-8)


def test_local_moments_infinite_segment():
    """Infinite segments need a strictly negative slope."""
    assert local_moments(-2.0, math.inf) == pytest.approx((0.5, 0.25, 0.25))
    with pytest.raises(DomainError):
        local_moments(0.0, math.inf)


def test_adaptive_integrate_gamma_three_halves():
    """int_0^inf sqrt(x) exp(-x) dx = Gamma(3/2)."""
    result = adaptive_integrate(
        lambda x: math.sqrt(x) * math.exp(-x), (0.0, math.inf), points=[1.0]
    )
    assert result.method is IntegrationMethod.ADAPTIVE
    assert result.value == pytest.approx(0.8862269255, rel=1e-9)
    assert result.abs_error_estimate < 1e-8


def test_adaptive_integrate_splits_at_points():
    """A kink passed as a break point is integrated exactly."""
    result = adaptive_integrate(
        lambda x: math.exp(-abs(x - 0.3)), (-math.inf, math.inf), points=[0.3]
    )
    assert result.value == pytest.approx(2.0, rel=1e-10)


def test_adaptive_integrate_non_convergence():
    """A non-integrable singularity raises with the best estimate attached."""
    with pytest.raises(NonConvergenceError) as info:
        adaptive_integrate(lambda x: 1.0 / x, (0.0, 1.0), limit=5)
    assert info.value.best_estimate is not None


def test_adaptive_integrate_bad_domain():
    """The domain must be ordered."""
    with pytest.raises(DomainError):
        adaptive_integrate(math.exp, (1.0, 0.0))


def test_adaptive_integrate_exp_shifts_scale():
    """exp(log_g - scale) is integrated; the caller restores the scale."""
    scale = 500.0
    result = adaptive_integrate_exp(
        lambda x: scale - x * x, (-math.inf, math.inf), scale, points=[0.0]
    )
    assert result.value == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_integral_result_rejects_negative_error():
    """Error estimates are non-negative."""
    with pytest.raises(ValueError):
        IntegralResult(1.0, -1.0, IntegrationMethod.ADAPTIVE)


def test_riemann_oracle_gaussian():
    """The midpoint oracle integrates a Gaussian on the whole line."""
    value = riemann_oracle(lambda x: np.exp(-0.5 * x * x), (-math.inf, math.inf), 20_000)
    assert value == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-8)


def test_riemann_oracle_mass_far_from_origin():
    """Tails are clipped around the integrand's mass, not around 0."""

    def g(x):
        return np.exp(-0.5 * (x + 60.0) ** 2)

    expected = math.sqrt(2.0 * math.pi)
    assert riemann_oracle(g, (-math.inf, math.inf), 20_000) == pytest.approx(expected, rel=1e-8)
    assert riemann_oracle(
        g, (-math.inf, math.inf), 20_000, points=[-60.0]
    ) == pytest.approx(expected, rel=1e-8)


def test_riemann_oracle_mass_not_found():
    """An integrand that vanishes everywhere it is sampled is refused."""

    def g(x):
        return np.exp(-0.5 * (x - 5000.0) ** 2)

    with pytest.raises(DomainError, match="pass points near it"):
        riemann_oracle(g, (-math.inf, math.inf), 20_000)
    value = riemann_oracle(g, (-math.inf, math.inf), 20_000, points=[5000.0])
    assert value == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-8)


def test_riemann_oracle_minimum_points():
    """Fewer than 1000 points is refused."""
    with pytest.raises(DomainError):
        riemann_oracle(np.exp, (0.0, 1.0), 10)
