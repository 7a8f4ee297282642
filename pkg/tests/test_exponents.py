"""
Tests for norm exponents.
"""

import math

import pytest

from lpbounds.errors import DomainError
from lpbounds.exponents import (
    INF,
    as_exponent,
    conjugate,
    format_exponent,
    parse_exponent,
    reciprocal,
    require_norm_exponent,
)


@pytest.mark.parametrize("token", ["inf", "INF", " infinity ", "∞", math.inf])
def test_infinity_spellings(token):
    """Every spelling of infinity maps to the INF member."""
    assert as_exponent(token) is INF


def test_reciprocal_of_infinity_is_zero():
    """1/inf is exactly zero."""
    assert reciprocal(INF) == 0.0
    assert reciprocal(4.0) == 0.25


def test_conjugate_pairs():
    """1 and inf are conjugate; 2 is self-conjugate."""
    assert conjugate(1.0) is INF
    assert conjugate(INF) == 1.0
    assert conjugate(2.0) == 2.0
    assert conjugate(3.0) == pytest.approx(1.5)


def test_parse_rejects_garbage():
    """Non-numeric tokens raise DomainError."""
    with pytest.raises(DomainError, match="Cannot parse exponent"):
        parse_exponent("two")


def test_require_norm_exponent():
    """p < 1 is outside the norm range; NaN and -inf are not exponents."""
    assert require_norm_exponent(1.0) == 1.0
    with pytest.raises(DomainError):
        require_norm_exponent(0.5)
    with pytest.raises(DomainError):
        as_exponent(float("nan"))
    with pytest.raises(DomainError):
        as_exponent(-math.inf)


def test_format_exponent():
    """Report labels are 'inf' or the float repr."""
    assert format_exponent(INF) == "inf"
    assert format_exponent(2) == "2.0"
    assert parse_exponent(format_exponent(1.5)) == 1.5
