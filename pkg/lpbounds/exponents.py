"""
Norm exponents p, q in [1, inf].

Infinity is a distinguished enum member rather than ``math.inf`` so that
``1/inf`` is exactly zero and no code path ever divides by a huge float.
"""

import math
from enum import Enum
from typing import Union

from lpbounds.errors import DomainError


class Infinity(str, Enum):
    """The exponent p = infinity."""

    INF = "inf"

    def __repr__(self) -> str:
        return "INF"


INF = Infinity.INF

Exponent = Union[float, Infinity]


def as_exponent(p: Union[float, int, str, Infinity]) -> Exponent:
    """
    Normalize a user supplied exponent.

    Accepts numbers, ``math.inf``, ``INF`` and the strings ``"inf"`` / ``"∞"``.

    Raises:
        DomainError: If the value is not a number or is NaN
    """
    if isinstance(p, Infinity):
        return p
    if isinstance(p, str):
        return parse_exponent(p)
    value = float(p)
    if math.isnan(value):
        raise DomainError("Exponent must be a number, got NaN")
    if math.isinf(value):
        if value < 0:
            raise DomainError("Exponent -inf is not supported")
        return INF
    return value


def parse_exponent(token: str) -> Exponent:
    """Parse a command-line exponent token; ``inf`` selects p = infinity."""
    text = token.strip().lower()
    if text in ("inf", "infinity", "∞", "+inf"):
        return INF
    try:
        return as_exponent(float(text))
    except ValueError as e:
        raise DomainError(f"Cannot parse exponent {token!r}: expected a number or 'inf'") from e


def is_inf(p: Exponent) -> bool:
    return p is INF


def reciprocal(p: Exponent) -> float:
    """Return 1/p, with 1/inf == 0 exactly."""
    if p is INF:
        return 0.0
    return 1.0 / float(p)


def conjugate(p: Exponent) -> Exponent:
    """Holder conjugate p' with 1/p + 1/p' = 1."""
    if p is INF:
        return 1.0
    value = float(p)
    if value == 1.0:
        return INF
    return value / (value - 1.0)


def require_norm_exponent(p: Exponent, name: str = "p") -> Exponent:
    """
    Validate that ``p`` lies in [1, inf].

    Raises:
        DomainError: If ``p < 1``
    """
    p = as_exponent(p)
    if p is not INF and float(p) < 1.0:
        raise DomainError(f"{name} must satisfy 1 <= {name} <= inf, got {p}")
    return p


def format_exponent(p: Exponent) -> str:
    """Render an exponent for reports (``inf`` or shortest float repr)."""
    if p is INF:
        return "inf"
    return repr(float(p))


def exponent_sort_key(p: Exponent) -> float:
    return math.inf if p is INF else float(p)
