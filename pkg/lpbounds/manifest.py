"""
Run manifests: everything needed to reproduce a report.
"""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from lpbounds.config import get_settings
from lpbounds.density import density_from_spec, standard_catalog
from lpbounds.errors import UsageError
from lpbounds.generator import GeneratorConfig, generate_batch
from lpbounds.multivariate import MultivariateDensity, standard_multivariate_families
from lpbounds.sweep import SweepGrid
from lpbounds.verdicts import SCHEMA_VERSION

logger = logging.getLogger(__name__)

ND_FAMILIES = ("gaussian-nd", "product-nd", "all-nd")


def multivariate_family(name: str, n: int, seed: int) -> List[MultivariateDensity]:
    """
    Named selection from the standard multivariate families in dimension ``n``.

    Raises:
        UsageError: On an unknown name
    """
    if name not in ND_FAMILIES:
        raise UsageError(f"Unknown multivariate family {name!r}; expected one of {ND_FAMILIES}")
    members = standard_multivariate_families(n, seed)
    if name == "gaussian-nd":
        return [m for m in members if m.is_gaussian]
    if name == "product-nd":
        return [m for m in members if not m.is_gaussian]
    return members


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class RunManifest(BaseModel):
    """
    Inputs of one run. Embedded in every report; ``densities()`` rebuilds
    the exact density list the run used.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    schema_version: int = SCHEMA_VERSION
    command: str
    density_specs: List[Dict[str, Any]] = Field(default_factory=list)
    include_catalog: bool = False
    generator: Optional[GeneratorConfig] = None
    random_count: int = 0
    nd_family: Optional[str] = None
    dimensions: List[int] = Field(default_factory=list)
    scope: bool = False
    grid: Optional[SweepGrid] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    seed: int = Field(default_factory=lambda: get_settings().default_seed)
    tool_version: str = Field(default_factory=lambda: get_settings().app_version)
    timestamp: str = Field(default_factory=_now)

    def densities(self) -> List[Any]:
        """Explicit specs, then the catalog, then generated, then multivariate members."""
        out: List[Any] = [
            density_from_spec(spec, f"$.density_specs[{i}]")
            for i, spec in enumerate(self.density_specs)
        ]
        if self.include_catalog:
            out.extend(standard_catalog())
        if self.random_count:
            config = self.generator or GeneratorConfig(seed=self.seed)
            out.extend(generate_batch(config, self.random_count))
        if self.nd_family is not None:
            for n in self.dimensions:
                out.extend(multivariate_family(self.nd_family, n, self.seed))
        return out

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote manifest to {path}")
        return path

    @classmethod
    def read(cls, path: Union[str, Path]) -> "RunManifest":
        """
        Raises:
            UsageError: If the file is not a manifest of a supported schema
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"Cannot read manifest {path}: {e}") from e
        if isinstance(data, dict) and isinstance(data.get("manifest"), dict):
            data = data["manifest"]
        version = data.get("schema_version") if isinstance(data, dict) else None
        if version != SCHEMA_VERSION:
            raise UsageError(
                f"Manifest {path} has schema version {version!r}, expected {SCHEMA_VERSION}"
            )
        return cls.model_validate(data)
