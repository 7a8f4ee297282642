"""
CLI command evaluating functionals of one density.
"""

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from lpbounds.cli.common import OutputFormat, console, dump_json, emit, exponents, fail, fmt
from lpbounds.density import load_density_spec
from lpbounds.errors import LpBoundsError
from lpbounds.exponents import INF
from lpbounds.functionals import DensityProfile, FunctionalValue
from lpbounds.manifest import RunManifest
from lpbounds.verdicts import SCHEMA_VERSION


def evaluate(
    spec_file: Path = typer.Argument(..., exists=True, dir_okay=False, help="Density spec file"),
    lp: Optional[List[str]] = typer.Option(None, "--lp", help="L^p norm (repeatable, 'inf' ok)"),
    supnorm: bool = typer.Option(False, "--supnorm", help="Sup-norm"),
    sigma: Optional[List[float]] = typer.Option(
        None, "--sigma", help="Moment norm sigma_alpha (repeatable)"
    ),
    entropy: bool = typer.Option(False, "--entropy", help="Differential entropy"),
    renyi: Optional[List[str]] = typer.Option(None, "--renyi", help="Renyi entropy order p > 1"),
    mean: bool = typer.Option(False, "--mean", help="Mean"),
    out: OutputFormat = typer.Option(OutputFormat.JSON, "--out", help="json or table"),
    output_file: Optional[Path] = typer.Option(None, "--output-file", "-o", help="Write here"),
) -> None:
    """Evaluate functionals of the density in SPEC_FILE."""
    try:
        density = load_density_spec(spec_file)
        profile = DensityProfile(density)
        values: List[FunctionalValue] = []
        if mean:
            values.append(profile.mean())
        values.extend(profile.lp_norm(p) for p in exponents(lp))
        if supnorm:
            values.append(profile.lp_norm(INF))
        values.extend(profile.sigma_alpha(a) for a in sigma or [])
        if entropy:
            values.append(profile.diff_entropy())
        values.extend(profile.renyi_entropy(p) for p in exponents(renyi))
    except (LpBoundsError, ValueError) as e:
        fail(e, code=1)

    if not values:
        console.print("[yellow]No functionals requested.[/yellow]")
        return

    if out == OutputFormat.TABLE:
        table = Table(title=f"Functionals of {density.describe()}")
        table.add_column("Functional", style="cyan")
        table.add_column("Parameter", style="blue")
        table.add_column("Value", style="green")
        table.add_column("Error", style="yellow")
        table.add_column("Method", style="magenta")
        for v in values:
            table.add_row(
                v.kind.value, v.parameter or "", fmt(v.value), fmt(v.error_estimate), v.method.value
            )
        console.print(table)
        return

    manifest = RunManifest(command="eval", density_specs=[density.to_spec()])
    report = {
        "schema_version": SCHEMA_VERSION,
        "manifest": manifest.model_dump(mode="json"),
        "density": density.to_spec(),
        "values": [v.model_dump(mode="json") for v in values],
    }
    emit(dump_json(report), output_file)
