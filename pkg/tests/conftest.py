"""
Pytest configuration and fixtures for lpbounds tests.

Fixtures:
    clean_settings  - Autouse; removes LPBOUNDS_* variables and reloads settings
    gaussian        - Standard normal catalog density
    exponential     - Rate-one exponential catalog density
    pll_laplace     - Laplace(0, 1) as a one-knot piecewise log-linear density
    catalog         - The standard catalog
    generator_config - Seeded generator configuration
    runner          - Typer CliRunner
    write_spec      - Writes a density spec to a JSON file in tmp_path

Usage:
    # Skip the slow searches and sweeps
    pytest -m "not slow"

    # Only the Monte Carlo checks
    pytest -m stochastic
"""

import json
import os
from pathlib import Path
from typing import Any, Callable

import pytest
from typer.testing import CliRunner

from lpbounds.config import reload_settings
from lpbounds.density import AnalyticDensity, PiecewiseLogLinearDensity, standard_catalog
from lpbounds.generator import GeneratorConfig


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings, whatever the shell exported."""
    for name in list(os.environ):
        if name.upper().startswith("LPBOUNDS_"):
            monkeypatch.delenv(name, raising=False)
    reload_settings()
    yield
    # The CLI writes tolerance overrides straight into os.environ.
    for name in list(os.environ):
        if name.upper().startswith("LPBOUNDS_"):
            del os.environ[name]
    reload_settings()


@pytest.fixture
def gaussian() -> AnalyticDensity:
    return AnalyticDensity.gaussian(0.0, 1.0)


@pytest.fixture
def exponential() -> AnalyticDensity:
    return AnalyticDensity.exponential(1.0)


@pytest.fixture
def pll_laplace() -> PiecewiseLogLinearDensity:
    return PiecewiseLogLinearDensity([0.0], [0.0], 1.0, -1.0, symmetric=True)


@pytest.fixture
def catalog():
    return standard_catalog()


@pytest.fixture
def generator_config() -> GeneratorConfig:
    return GeneratorConfig(seed=1234)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def write_spec(tmp_path) -> Callable[[Any, str], Path]:
    """Return a helper writing ``spec`` as JSON under ``tmp_path``."""

    def _write(spec: Any, name: str = "density.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(spec))
        return path

    return _write
