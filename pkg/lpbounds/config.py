"""
Configuration management for lpbounds using Pydantic Settings.
"""

from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:
    import tomli as tomllib  # Python 3.10


def _get_version() -> str:
    """Read version from pyproject.toml."""
    try:
        pyproject_path = Path(__file__).parent.parent / "pyproject.toml"
        with open(pyproject_path, "rb") as f:
            pyproject = tomllib.load(f)
            return pyproject.get("project", {}).get("version", "0.0.0")
    except Exception:
        # Fallback version if reading fails
        return "0.0.0"


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix ``LPBOUNDS_``)."""

    model_config = SettingsConfigDict(
        env_prefix="LPBOUNDS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application Configuration
    app_name: str = "lpbounds"
    app_version: str = _get_version()
    debug: bool = False
    log_level: str = "WARNING"

    # Quadrature
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_subdivisions: int = 200
    log_underflow: float = -700.0
    riemann_points: int = 200_000

    # Verdicts
    verdict_tol: float = 1e-6  # quadrature-backed quantities
    closed_form_tol: float = 1e-9  # closed-form / exact-segment only
    equality_tol: float = 1e-8

    # Difference density grid
    difference_grid_points: int = 4096
    difference_grid_span: float = 12.0

    # Sweeps
    workers: int = 1
    default_seed: int = 42

    # Extremal search
    search_restarts: int = 8
    search_budget: int = 2000
    search_tol: float = 1e-6

    # Monte Carlo
    mc_samples: int = 1_000_000
    mc_confidence: float = 0.99

    def validate_tolerances(self) -> None:
        """
        Validate that the numerical tolerances are usable.

        Raises:
            ValueError: If any tolerance is non-positive or the verdict tolerance
                is not looser than the quadrature tolerance
        """
        for name in ("rel_tol", "abs_tol", "verdict_tol", "closed_form_tol", "equality_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name.upper()} must be positive, got {getattr(self, name)}")
        if self.verdict_tol <= self.rel_tol:
            raise ValueError(
                f"VERDICT_TOL ({self.verdict_tol}) must be larger than REL_TOL ({self.rel_tol}) "
                "so that verdicts never flip on quadrature noise"
            )
        if not 0 < self.mc_confidence < 1:
            raise ValueError(f"MC_CONFIDENCE must lie in (0, 1), got {self.mc_confidence}")


# Global settings instance
settings = Settings()


def reload_settings() -> Settings:
    """
    Reload settings from environment and .env file.

    Returns:
        New Settings instance with reloaded values
    """
    global settings
    settings = Settings()
    return settings


def get_settings() -> Settings:
    """Return the current settings instance (follows ``reload_settings``)."""
    return settings
