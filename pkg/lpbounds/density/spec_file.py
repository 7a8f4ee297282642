"""
Density spec files.

A spec is either a catalog member::

    {"family": "gaussian", "params": {"mu": 0, "sigma": 1}}

or a piecewise log-linear density, possibly unnormalized::

    {"pll": {"knots": [0], "log_values": [0], "left_slope": 1, "right_slope": -1},
     "symmetric": true}

Files may be JSON or YAML and hold one spec or a list of specs.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import yaml

from lpbounds.density.catalog import AnalyticDensity
from lpbounds.density.pll import PiecewiseLogLinearDensity
from lpbounds.errors import DensitySpecError, DomainError

logger = logging.getLogger(__name__)

DensityHandle = Union[AnalyticDensity, PiecewiseLogLinearDensity]

_PLL_FIELDS = ("knots", "log_values", "left_slope", "right_slope")


def density_from_spec(spec: Any, location: str = "$") -> DensityHandle:
    """
    Build a density from a parsed spec mapping.

    Raises:
        DensitySpecError: If the mapping is malformed; ``location`` names the
            offending field in JSONPath-like notation
    """
    if not isinstance(spec, dict):
        raise DensitySpecError("Density spec must be a mapping", location)
    if "pll" in spec and "family" in spec:
        raise DensitySpecError(
            "Density spec must have either 'family' or 'pll', not both", location
        )
    if "family" in spec:
        params = spec.get("params", {})
        if not isinstance(params, dict):
            raise DensitySpecError("'params' must be a mapping", f"{location}.params")
        try:
            return AnalyticDensity.from_params(str(spec["family"]), params)
        except DomainError as e:
            raise DensitySpecError(str(e), f"{location}.params") from e
    if "pll" in spec:
        body = spec["pll"]
        if not isinstance(body, dict):
            raise DensitySpecError("'pll' must be a mapping", f"{location}.pll")
        for name in _PLL_FIELDS:
            if name not in body:
                raise DensitySpecError(f"Missing field {name!r}", f"{location}.pll.{name}")
        for name in ("knots", "log_values"):
            if not isinstance(body[name], list):
                raise DensitySpecError(f"{name!r} must be a list", f"{location}.pll.{name}")
        try:
            density = PiecewiseLogLinearDensity(
                knots=body["knots"],
                log_values=body["log_values"],
                left_slope=body["left_slope"],
                right_slope=body["right_slope"],
                symmetric=bool(spec.get("symmetric", False)),
            )
        except (DomainError, TypeError, ValueError) as e:
            raise DensitySpecError(str(e), f"{location}.pll") from e
        if abs(density.log_normalizer) > 0.0:
            logger.info(
                f"Normalized PLL spec at {location}: log normalization constant "
                f"{density.log_normalizer!r}"
            )
        return density
    raise DensitySpecError("Density spec needs a 'family' or a 'pll' entry", location)


def _parse_text(text: str, source: str) -> Any:
    if source.endswith((".yaml", ".yml")):
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise DensitySpecError(f"Invalid YAML: {e}", source) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DensitySpecError(f"Invalid JSON: {e.msg}", f"{source}:{e.lineno}:{e.colno}") from e


def load_density_specs(path: Union[str, Path]) -> List[DensityHandle]:
    """
    Load every density in a JSON or YAML spec file.

    Raises:
        DensitySpecError: If the file is unreadable or any entry is malformed
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise DensitySpecError(f"Cannot read density spec: {e.strerror}", str(path)) from e
    data = _parse_text(text, str(path))
    if isinstance(data, list):
        return [density_from_spec(item, f"$[{i}]") for i, item in enumerate(data)]
    return [density_from_spec(data)]


def load_density_spec(path: Union[str, Path]) -> DensityHandle:
    """
    Load a file holding exactly one density.

    Raises:
        DensitySpecError: If the file holds zero or several densities
    """
    densities = load_density_specs(path)
    if len(densities) != 1:
        raise DensitySpecError(f"Expected one density, found {len(densities)}", str(path))
    return densities[0]


def save_density_spec(density: DensityHandle, path: Union[str, Path]) -> Path:
    """Write a density spec as JSON (or YAML for .yaml/.yml paths)."""
    path = Path(path)
    spec: Dict[str, Any] = density.to_spec()
    if path.suffix in (".yaml", ".yml"):
        path.write_text(yaml.safe_dump(spec, sort_keys=False))
    else:
        path.write_text(json.dumps(spec, indent=2) + "\n")
    return path
