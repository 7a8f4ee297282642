"""
CLI commands for extremal search and tightness landscapes.
"""

import json
from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from lpbounds.cli.common import OutputFormat, console, dump_json, emit, exponents, fail, fmt
from lpbounds.density import density_from_spec, load_density_spec
from lpbounds.errors import CounterexampleFound, LpBoundsError
from lpbounds.functionals import DensityProfile
from lpbounds.inequalities import check_claim
from lpbounds.manifest import RunManifest
from lpbounds.search import SearchProblem, maximize_tightness, tightness_landscape
from lpbounds.sweep import EXIT_COUNTEREXAMPLE
from lpbounds.verdicts import SCHEMA_VERSION, ClaimId, verdicts_to_csv


def search(
    claim: ClaimId = typer.Argument(..., help="Claim id, e.g. lemma4"),
    family: str = typer.Option("catalog", "--family", help="pll<k>, a catalog family or catalog"),
    p: Optional[str] = typer.Option(None, "--p", help="Exponent p ('inf' ok)"),
    q: Optional[str] = typer.Option(None, "--q", help="Exponent q ('inf' ok)"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Moment order"),
    budget: Optional[int] = typer.Option(None, "--budget", min=1, help="Evaluations per restart"),
    restarts: Optional[int] = typer.Option(None, "--restarts", min=1, help="Random restarts"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Search seed"),
    witness_file: Optional[Path] = typer.Option(
        None, "--witness-file", help="Write the best density spec here"
    ),
    out: OutputFormat = typer.Option(OutputFormat.TABLE, "--out", help="table, json or csv"),
    output_file: Optional[Path] = typer.Option(None, "--output-file", "-o", help="Write here"),
) -> None:
    """
    Maximize the tightness ratio of CLAIM over a density family.

    Exits 4 and writes the witness density if a ratio above 1 + tol is found.
    """
    overrides = {"budget": budget, "restarts": restarts}
    try:
        problem = SearchProblem(
            claim_id=claim,
            family=family,
            p=p,
            q=q,
            alpha=alpha,
            **{k: v for k, v in overrides.items() if v is not None},
        )
        with console.status(f"[bold green]Searching {claim.value} over {family}..."):
            result = maximize_tightness(problem, seed)
    except CounterexampleFound as e:
        target = witness_file or Path("counterexample.json")
        target.write_text(json.dumps(e.witness, indent=2) + "\n", encoding="utf-8")
        console.print(f"[bold red]Counterexample:[/bold red] {e}")
        console.print(f"Witness density written to {target}")
        raise typer.Exit(code=EXIT_COUNTEREXAMPLE)
    except (LpBoundsError, ValueError) as e:
        fail(e, code=1)

    if witness_file is not None:
        witness_file.write_text(json.dumps(result.witness, indent=2) + "\n", encoding="utf-8")

    if out == OutputFormat.CSV:
        p_val, q_val = problem.exponents()
        witness = DensityProfile(density_from_spec(result.witness))
        verdict = check_claim(problem.claim_id, witness, p_val, q_val, problem.alpha)
        emit(verdicts_to_csv([verdict]), output_file)
    elif out == OutputFormat.JSON:
        manifest = RunManifest(
            command="search",
            parameters=problem.model_dump(mode="json"),
            seed=result.seed,
        )
        payload = {
            "schema_version": SCHEMA_VERSION,
            "manifest": manifest.model_dump(mode="json"),
            "result": result.model_dump(mode="json"),
        }
        emit(dump_json(payload), output_file)
    else:
        table = Table(title=f"Search: {claim.value}")
        table.add_column("Field", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Best ratio", fmt(result.best_ratio))
        table.add_row("Champion family", result.family)
        table.add_row("Best restart", str(result.best_restart))
        table.add_row("Evaluations", str(result.evaluations))
        table.add_row("Budget exhausted", "yes" if result.budget_exhausted else "no")
        console.print(table)


def scan(
    claim: ClaimId = typer.Argument(..., help="Claim id, e.g. theorem1"),
    spec_file: Path = typer.Argument(..., exists=True, dir_okay=False, help="Density spec file"),
    p: Optional[List[str]] = typer.Option(None, "--p", help="Exponent p (repeatable)"),
    q: Optional[List[str]] = typer.Option(None, "--q", help="Exponent q (repeatable)"),
    alpha: Optional[List[float]] = typer.Option(None, "--alpha", help="Moment order (repeatable)"),
    out: OutputFormat = typer.Option(OutputFormat.CSV, "--out", help="csv, json or table"),
    output_file: Optional[Path] = typer.Option(None, "--output-file", "-o", help="Write here"),
) -> None:
    """Tabulate the tightness of CLAIM on one density over a (p, q, alpha) grid."""
    try:
        density = load_density_spec(spec_file)
        rows = tightness_landscape(
            claim,
            density,
            exponents(p) or [None],
            exponents(q) or [None],
            alpha or [2.0],
        )
    except (LpBoundsError, ValueError) as e:
        fail(e, code=1)

    if out == OutputFormat.CSV:
        emit(verdicts_to_csv(rows), output_file)
    elif out == OutputFormat.JSON:
        emit(dump_json([r.model_dump(mode="json") for r in rows]), output_file)
    else:
        table = Table(title=f"Tightness of {claim.value} on {density.describe()}")
        for name in ("p", "q", "alpha", "lhs", "rhs", "tightness", "holds"):
            table.add_column(name)
        for r in rows:
            table.add_row(
                r.p or "",
                r.q or "",
                fmt(r.alpha),
                fmt(r.lhs),
                fmt(r.rhs),
                fmt(r.tightness),
                "yes" if r.holds else "no",
            )
        console.print(table)
