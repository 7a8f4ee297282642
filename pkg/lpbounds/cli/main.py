"""
Main CLI application using Typer.
"""

from typing import Optional

import typer
from rich.table import Table

from lpbounds import __version__
from lpbounds.cli import check, constants, evaluate, search
from lpbounds.cli.common import console, fmt
from lpbounds.logging_config import configure_logging

# Create main app
app = typer.Typer(
    name="lpbounds",
    help="Lp-norm, moment and entropy inequalities for log-concave densities",
    epilog=f"lpbounds version {__version__}",
    add_completion=True,
)

app.command("constants")(constants.constants)
app.command("eval")(evaluate.evaluate)
app.command("check")(check.check)
app.command("search")(search.search)
app.command("scan")(search.scan)


def version_callback(value: bool) -> None:
    """Callback for --version flag."""
    if value:
        console.print(f"lpbounds version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="Log level (default from LPBOUNDS_LOG_LEVEL)"
    ),
) -> None:
    """Lp-norm inequalities for log-concave densities."""
    try:
        configure_logging(log_level)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--log-level") from e


@app.command()
def version() -> None:
    """Display the version of lpbounds."""
    console.print(f"lpbounds version: {__version__}", style="bold green")


@app.command()
def info() -> None:
    """Display the numerical configuration."""
    from lpbounds.config import get_settings

    settings = get_settings()
    table = Table(title="lpbounds Configuration")
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Quadrature rel_tol", fmt(settings.rel_tol))
    table.add_row("Quadrature abs_tol", fmt(settings.abs_tol))
    table.add_row("Verdict tolerance", fmt(settings.verdict_tol))
    table.add_row("Closed-form tolerance", fmt(settings.closed_form_tol))
    table.add_row("Workers", str(settings.workers))
    table.add_row("Default seed", str(settings.default_seed))
    table.add_row("Search restarts", str(settings.search_restarts))
    table.add_row("Search budget", str(settings.search_budget))
    table.add_row("Monte Carlo samples", str(settings.mc_samples))

    console.print(table)

    try:
        settings.validate_tolerances()
        console.print("\n[bold green]✓[/bold green] Tolerances are consistent", style="green")
    except ValueError as e:
        console.print(f"\n[bold red]✗[/bold red] {e}", style="red")


if __name__ == "__main__":
    app()
