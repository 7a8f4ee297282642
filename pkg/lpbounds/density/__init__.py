"""
One-dimensional log-concave densities.

Two representations share one duck-typed interface: :class:`AnalyticDensity`
(catalog members with closed-form functionals) and
:class:`PiecewiseLogLinearDensity` (exact piecewise log-linear densities). The
module-level functions accept either.
"""

from typing import Any, List, Tuple

from lpbounds.density.catalog import AnalyticDensity, Family
from lpbounds.density.pll import PiecewiseLogLinearDensity, log_integral_exp_pl
from lpbounds.density.spec_file import (
    DensityHandle,
    density_from_spec,
    load_density_spec,
    load_density_specs,
    save_density_spec,
)


def log_density(f: DensityHandle, x: Any) -> Any:
    """log f(x); -inf outside the support of bounded catalog members."""
    return f.log_density(x)


def affine_image(f: DensityHandle, c: float, t: float) -> DensityHandle:
    """Density of cX + t in the same representation as ``f``."""
    return f.affine_image(c, t)


def mode_and_supnorm(f: DensityHandle) -> Tuple[float, float]:
    return f.mode_and_supnorm()


def support(f: DensityHandle) -> Tuple[float, float]:
    return f.support()


def breakpoints(f: DensityHandle) -> Tuple[float, ...]:
    return f.breakpoints()


def standard_catalog() -> List[AnalyticDensity]:
    """Six families, three parameterizations each."""
    return [
        AnalyticDensity.gaussian(0.0, 1.0),
        AnalyticDensity.gaussian(3.0, 2.0),
        AnalyticDensity.gaussian(-1.0, 0.25),
        AnalyticDensity.exponential(1.0),
        AnalyticDensity.exponential(0.5, loc=1.0),
        AnalyticDensity.exponential(3.0, reflected=True),
        AnalyticDensity.laplace(0.0, 1.0),
        AnalyticDensity.laplace(2.0, 0.5),
        AnalyticDensity.laplace(-3.0, 4.0),
        AnalyticDensity.uniform(0.0, 1.0),
        AnalyticDensity.uniform(-1.0, 1.0),
        AnalyticDensity.uniform(2.0, 7.0),
        AnalyticDensity.logistic(0.0, 1.0),
        AnalyticDensity.logistic(1.0, 0.3),
        AnalyticDensity.logistic(-2.0, 2.5),
        AnalyticDensity.gamma(1.5),
        AnalyticDensity.gamma(3.0, rate=2.0),
        AnalyticDensity.gamma(8.0, rate=0.5, loc=-4.0),
    ]


__all__ = [
    "AnalyticDensity",
    "DensityHandle",
    "Family",
    "PiecewiseLogLinearDensity",
    "affine_image",
    "breakpoints",
    "density_from_spec",
    "load_density_spec",
    "load_density_specs",
    "log_density",
    "log_integral_exp_pl",
    "mode_and_supnorm",
    "save_density_spec",
    "standard_catalog",
    "support",
]
