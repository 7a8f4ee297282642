"""
Helpers shared by the CLI commands.
"""

import json
import os
from enum import Enum
from pathlib import Path
from typing import Any, List, NoReturn, Optional, Sequence

import typer
from rich.console import Console

from lpbounds.config import reload_settings
from lpbounds.exponents import Exponent, parse_exponent

console = Console()


class OutputFormat(str, Enum):
    """Report formats."""

    JSON = "json"
    CSV = "csv"
    TABLE = "table"


def fmt(x: Optional[float]) -> str:
    """Floats as printed on the console: 12 significant digits."""
    if x is None:
        return "n/a"
    return f"{x:.12g}"


def fail(error: Exception, code: int = 1) -> NoReturn:
    """Print an error the standard way and exit with ``code``."""
    console.print(f"[bold red]Error:[/bold red] {error}")
    raise typer.Exit(code=code)


def exponents(tokens: Optional[Sequence[str]]) -> List[Exponent]:
    """Parse p/q tokens; ``inf`` is infinity."""
    return [parse_exponent(t) for t in tokens or []]


def apply_tolerance(tol: Optional[float]) -> None:
    """
    Override both verdict tolerances for this process and its workers.
    """
    if tol is None:
        return
    if tol <= 0:
        raise typer.BadParameter(f"--tol must be positive, got {tol}")
    os.environ["LPBOUNDS_VERDICT_TOL"] = repr(tol)
    os.environ["LPBOUNDS_CLOSED_FORM_TOL"] = repr(tol)
    reload_settings()


def apply_tolerances(tolerances: dict) -> None:
    """Restore the tolerances recorded in a manifest."""
    for name, value in tolerances.items():
        os.environ[f"LPBOUNDS_{name.upper()}"] = repr(float(value))
    if tolerances:
        reload_settings()


def emit(text: str, output_file: Optional[Path]) -> None:
    """Write a report to ``output_file`` or to stdout."""
    if output_file is None:
        typer.echo(text, nl=not text.endswith("\n"))
        return
    output_file.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    console.print(f"[green]Report written to {output_file}[/green]")


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, allow_nan=True)
