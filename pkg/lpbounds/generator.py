"""
Seeded random piecewise log-linear densities for property sweeps.

``generate(config, index)`` is a pure function of its arguments: the random
stream is ``SeedSequence([seed, index])``, so any index can be regenerated in
isolation and batches can be split across workers freely.
"""

import logging
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lpbounds.density.pll import PiecewiseLogLinearDensity

logger = logging.getLogger(__name__)

_SEED_MASK = (1 << 64) - 1
# Knots closer than this fraction of the span are merged when symmetrizing.
_MERGE_FRACTION = 1e-6


class GeneratorConfig(BaseModel):
    """
    Parameters of the PLL density generator.

    Serialized into every sweep report so a run can be reproduced.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 42
    knot_count_range: Tuple[int, int] = (2, 12)
    knot_span: Tuple[float, float] = (-5.0, 5.0)
    slope_scale: float = Field(default=1.0, gt=0)
    symmetric_fraction: float = Field(default=0.25, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_ranges(self) -> "GeneratorConfig":
        lo, hi = self.knot_count_range
        if lo < 1 or hi < lo:
            raise ValueError(
                f"knot_count_range must satisfy 1 <= lo <= hi, got {self.knot_count_range}"
            )
        a, b = self.knot_span
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise ValueError(
                f"knot_span must be a finite interval with lo < hi, got {self.knot_span}"
            )
        return self


def _rng(config: GeneratorConfig, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([config.seed & _SEED_MASK, int(index)]))


def _knots(rng: np.random.Generator, k: int, span: Tuple[float, float]) -> np.ndarray:
    lo, hi = span
    # The constant keeps every gap a visible fraction of the span.
    gaps = 0.05 + rng.exponential(size=k + 1)
    return lo + (hi - lo) * np.cumsum(gaps)[:k] / gaps.sum()


def _slopes(rng: np.random.Generator, k: int, scale: float) -> np.ndarray:
    """
    ``k + 1`` strictly decreasing slopes with the first > 0 > the last.

    Laplace variates (differences of exponentials) at a log-normal scale, sorted
    and then shifted by a point between the extremes.
    """
    spread = scale * np.exp(rng.standard_normal())
    raw = np.sort(spread * rng.laplace(size=k + 1))[::-1]
    u = float(np.clip(rng.beta(0.5, 0.5), 0.02, 0.98))
    slopes = raw - (raw[-1] + u * (raw[0] - raw[-1]))
    if rng.uniform() < 0.5:
        slopes[0] *= np.exp(rng.uniform(0.0, 4.0))
    if rng.uniform() < 0.5:
        slopes[-1] *= np.exp(rng.uniform(0.0, 4.0))
    return slopes


def symmetrize(f: PiecewiseLogLinearDensity) -> PiecewiseLogLinearDensity:
    """Average ``log f`` with its mirror image about the midpoint of the knots."""
    knots = f.knots
    c = 0.5 * (knots[0] + knots[-1])
    offsets = np.sort(np.abs(knots - c))
    merge = _MERGE_FRACTION * max(knots[-1] - knots[0], 1.0)
    kept = [offsets[0]]
    for d in offsets[1:]:
        if d - kept[-1] > merge:
            kept.append(d)
    d = np.asarray(kept)
    centered = d[0] <= merge
    if centered:
        d[0] = 0.0
    values = 0.5 * (f.log_density(c + d) + f.log_density(c - d))
    if centered:
        new_knots = np.concatenate([c - d[:0:-1], c + d])
        new_values = np.concatenate([values[:0:-1], values])
    else:
        new_knots = np.concatenate([c - d[::-1], c + d])
        new_values = np.concatenate([values[::-1], values])
    tail = 0.5 * (f.left_slope - f.right_slope)
    return PiecewiseLogLinearDensity(new_knots, new_values, tail, -tail, symmetric=True)


def generate(config: GeneratorConfig, index: int) -> PiecewiseLogLinearDensity:
    """
    Draw the ``index``-th density of the stream defined by ``config``.

    Returns:
        A normalized log-concave PLL density; symmetrized (and flagged so) for
        roughly ``symmetric_fraction`` of the indices
    """
    rng = _rng(config, index)
    make_symmetric = rng.uniform() < config.symmetric_fraction
    k_lo, k_hi = config.knot_count_range
    k = int(rng.integers(k_lo, k_hi + 1))
    knots = _knots(rng, k, config.knot_span)
    slopes = _slopes(rng, k, config.slope_scale)
    log_values = np.concatenate([[0.0], np.cumsum(slopes[1:-1] * np.diff(knots))])
    f = PiecewiseLogLinearDensity(knots, log_values, float(slopes[0]), float(slopes[-1]))
    if make_symmetric:
        f = symmetrize(f)
    logger.debug(f"generated density {index} ({f.describe()}, symmetric={f.symmetric})")
    return f


def generate_batch(config: GeneratorConfig, count: int) -> List[PiecewiseLogLinearDensity]:
    """Densities ``0 .. count - 1`` of the stream."""
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    return [generate(config, i) for i in range(count)]
