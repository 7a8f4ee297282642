"""
Tests for the non-log-concave fixtures and how the claims behave on them.
"""

import math

import numpy as np
import pytest

from lpbounds.errors import DomainError
from lpbounds.functionals import lp_norm, oracle_lp_norm, sigma_alpha
from lpbounds.inequalities import check_finite_measure_inequality, check_lemma1, check_lemma5
from lpbounds.multivariate import check_lemma2
from lpbounds.scope import (
    GaussianMixture,
    bimodal_mixture,
    mixture_product,
    scope_fixtures,
    spike_mixture,
)


def test_mixture_moments():
    """0.5 N(-3, 1) + 0.5 N(3, 1) has mean 0 and variance 10."""
    f = bimodal_mixture(3.0)
    assert f.mean() == 0.0
    assert f.variance() == pytest.approx(10.0)
    assert sigma_alpha(f, 2.0).value == pytest.approx(math.sqrt(10.0), rel=1e-8)
    assert not f.is_log_concave


def test_mixture_weights_are_normalized():
    """Weights are rescaled to sum to one."""
    f = GaussianMixture([1.0, 3.0], [0.0, 1.0], [1.0, 1.0])
    np.testing.assert_allclose(f.weights, [0.25, 0.75])


def test_mixture_rejects_bad_arguments():
    """Mismatched shapes and non-positive scales are domain errors."""
    with pytest.raises(DomainError):
        GaussianMixture([1.0], [0.0, 1.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        GaussianMixture([1.0, 1.0], [0.0, 1.0], [1.0, 0.0])


def test_mixture_supnorm_finds_global_mode():
    """The spike at 0 dominates the wide bump at 10."""
    mode, sup = spike_mixture().mode_and_supnorm()
    assert abs(mode) < 1e-3
    assert sup == pytest.approx(0.5 / (0.01 * math.sqrt(2.0 * math.pi)), rel=1e-3)


def test_mixture_l2_norm_matches_oracle():
    """Quadrature and the midpoint oracle agree on a mixture."""
    f = scope_fixtures()[2]
    assert lp_norm(f, 3.0).value == pytest.approx(oracle_lp_norm(f, 3.0), rel=1e-6)


def test_spike_violates_log_concave_sup_bound():
    """||f||_inf sigma is far above Gamma(3)^(1/2) for the spike mixture."""
    v = check_lemma5(spike_mixture(), 2.0)
    assert not v.holds
    assert v.tightness > 10.0


@pytest.mark.parametrize("index", range(5))
def test_moment_lower_bound_holds_on_fixtures(index):
    """The moment/norm lower bound needs only a finite moment."""
    f = scope_fixtures()[index]
    for p in (1.5, 2.0, 8.0):
        assert check_lemma1(f, p, 2.0).holds


def test_finite_measure_holds_on_fixtures():
    """Holder on an interval holds for any density."""
    for f in scope_fixtures():
        assert check_finite_measure_inequality(f, (-2.0, 2.0), 1.0, 2.0).holds


def test_mixture_product_lower_bound():
    """The multivariate lower bound holds for a product of mixtures."""
    big_f = mixture_product(2)
    assert not big_f.is_log_concave
    assert check_lemma2(big_f, 2.0).holds
