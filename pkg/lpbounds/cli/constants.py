"""
CLI command printing the inequality constants.
"""

from typing import List, Optional

import typer
from rich.table import Table

from lpbounds.cli.common import OutputFormat, console, dump_json, fail, fmt
from lpbounds.errors import LpBoundsError
from lpbounds.special_functions import constant_set, multivariate_constant_set


def constants(
    alpha: Optional[List[float]] = typer.Option(
        None, "--alpha", "-a", help="Moment order (repeatable); default 1 and 2"
    ),
    n: Optional[List[int]] = typer.Option(None, "--n", help="Dimension (repeatable)"),
    out: OutputFormat = typer.Option(OutputFormat.TABLE, "--out", help="table or json"),
) -> None:
    """Print C_alpha, D_alpha and the multivariate C(n), D(n)."""
    alphas = alpha or [1.0, 2.0]
    dims = n or []
    try:
        rows = [constant_set(a) for a in alphas]
        nd_rows = [multivariate_constant_set(d) for d in dims]
    except LpBoundsError as e:
        fail(e, code=1)

    if out == OutputFormat.JSON:
        typer.echo(
            dump_json(
                {
                    "alpha": [r.model_dump() for r in rows],
                    "n": [r.model_dump() for r in nd_rows],
                }
            )
        )
        return

    table = Table(title="One-dimensional constants")
    table.add_column("alpha", style="cyan")
    table.add_column("C_alpha", style="green")
    table.add_column("D_alpha", style="green")
    for r in rows:
        table.add_row(fmt(r.alpha), fmt(r.c_alpha), fmt(r.d_alpha))
    console.print(table)

    if nd_rows:
        nd_table = Table(title="Multivariate constants")
        nd_table.add_column("n", style="cyan")
        nd_table.add_column("C(n)", style="green")
        nd_table.add_column("D(n)", style="green")
        for r in nd_rows:
            nd_table.add_row(str(r.n), fmt(r.c_n), fmt(r.d_n))
        console.print(nd_table)
