"""
CLI command running verdict sweeps.
"""

from pathlib import Path
from typing import Any, List, Optional

import typer
from rich.table import Table

from lpbounds.cli.common import (
    OutputFormat,
    apply_tolerance,
    apply_tolerances,
    console,
    dump_json,
    emit,
    fail,
    fmt,
)
from lpbounds.config import get_settings
from lpbounds.density import load_density_specs
from lpbounds.errors import LpBoundsError, UsageError
from lpbounds.generator import GeneratorConfig
from lpbounds.manifest import ND_FAMILIES, RunManifest
from lpbounds.scope import mixture_product, scope_fixtures
from lpbounds.sweep import (
    DEFAULT_ALPHAS,
    DEFAULT_EXPONENTS,
    SweepGrid,
    SweepReport,
    parse_claims,
    run_sweep,
)
from lpbounds.verdicts import SCHEMA_VERSION, ClaimId, summarize, verdicts_to_csv

_TIGHTENED = {
    ClaimId.THEOREM1: ClaimId.THEOREM1_TIGHTENED,
    ClaimId.LEMMA5: ClaimId.LEMMA5_TIGHTENED,
}


def _build_manifest(
    spec_file: Optional[Path],
    random: int,
    seed: int,
    catalog: bool,
    scope: bool,
    claims: List[str],
    tightened: bool,
    p: Optional[List[str]],
    q: Optional[List[str]],
    alpha: Optional[List[float]],
    family: Optional[str],
    n: Optional[List[int]],
) -> RunManifest:
    claim_list = parse_claims(claims)
    if tightened:
        claim_list = sorted({_TIGHTENED.get(c, c) for c in claim_list}, key=lambda c: c.order)
    if family is not None and family not in ND_FAMILIES:
        raise UsageError(f"Unknown --family {family!r}; expected one of {', '.join(ND_FAMILIES)}")
    dims = list(n or ([2] if family else []))
    if any(d < 1 for d in dims):
        raise UsageError(f"--n must be positive, got {dims}")
    specs = [d.to_spec() for d in load_density_specs(spec_file)] if spec_file else []
    if not (specs or catalog or random or family):
        raise UsageError("Nothing to check: give a spec file, --catalog, --random N or --family")
    grid = SweepGrid(
        ps=p or list(DEFAULT_EXPONENTS),
        qs=q or list(DEFAULT_EXPONENTS),
        alphas=alpha or list(DEFAULT_ALPHAS),
        claims=claim_list,
    )
    settings = get_settings()
    return RunManifest(
        command="check",
        density_specs=specs,
        include_catalog=catalog,
        generator=GeneratorConfig(seed=seed) if random else None,
        random_count=random,
        nd_family=family,
        dimensions=dims,
        scope=scope,
        grid=grid,
        tolerances={
            "verdict_tol": settings.verdict_tol,
            "closed_form_tol": settings.closed_form_tol,
        },
        seed=seed,
    )


def _scope_densities(manifest: RunManifest) -> List[Any]:
    if not manifest.scope:
        return []
    return list(scope_fixtures()) + [mixture_product(d) for d in manifest.dimensions if d >= 2]


def _print_summary(report: SweepReport) -> None:
    summary = summarize(report.verdicts)["claims"]
    table = Table(title="Verdicts")
    table.add_column("Claim", style="cyan")
    table.add_column("Checked", style="blue")
    table.add_column("Violations", style="red")
    table.add_column("Max tightness", style="green")
    for claim, entry in summary.items():
        table.add_row(
            claim, str(entry["checked"]), str(entry["violations"]), fmt(entry["max_tightness"])
        )
    console.print(table)
    for failure in report.failures:
        console.print(
            f"[bold red]Failed:[/bold red] {failure.describe()} "
            f"({failure.error_type}) {failure.message}"
        )


def check(
    spec_file: Optional[Path] = typer.Argument(
        None, exists=True, dir_okay=False, help="Density spec file (one density or a list)"
    ),
    random: int = typer.Option(0, "--random", min=0, help="Number of generated PLL densities"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Generator seed"),
    catalog: bool = typer.Option(False, "--catalog", help="Include the standard catalog"),
    scope: bool = typer.Option(False, "--scope", help="Also record non-log-concave fixtures"),
    claims: Optional[List[str]] = typer.Option(
        None, "--claims", help="Claim ids or groups: default, all-1d, all-nd, all"
    ),
    tightened: bool = typer.Option(False, "--tightened", help="Use the alpha = 2 tightened forms"),
    p: Optional[List[str]] = typer.Option(None, "--p", help="Exponent p (repeatable, 'inf' ok)"),
    q: Optional[List[str]] = typer.Option(None, "--q", help="Exponent q (repeatable, 'inf' ok)"),
    alpha: Optional[List[float]] = typer.Option(None, "--alpha", help="Moment order (repeatable)"),
    family: Optional[str] = typer.Option(
        None, "--family", help="Multivariate family: gaussian-nd, product-nd or all-nd"
    ),
    n: Optional[List[int]] = typer.Option(None, "--n", help="Dimension (repeatable)"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Worker processes"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative verdict tolerance"),
    out: OutputFormat = typer.Option(OutputFormat.TABLE, "--out", help="table, json or csv"),
    output_file: Optional[Path] = typer.Option(None, "--output-file", "-o", help="Write here"),
    manifest_file: Optional[Path] = typer.Option(
        None, "--manifest", help="Write the run manifest to this file"
    ),
    replay: Optional[Path] = typer.Option(
        None, "--replay", exists=True, dir_okay=False, help="Re-run a manifest or report"
    ),
) -> None:
    """
    Check the inequalities on densities and exit 0 if all hold.

    Exit codes: 0 all hold, 1 usage error, 2 violation, 3 numerical non-convergence.
    """
    try:
        if replay is not None:
            manifest = RunManifest.read(replay)
            apply_tolerances(manifest.tolerances)
        else:
            apply_tolerance(tol)
            manifest = _build_manifest(
                spec_file,
                random,
                seed if seed is not None else get_settings().default_seed,
                catalog,
                scope,
                claims or ["default"],
                tightened,
                p,
                q,
                alpha,
                family,
                n,
            )
        with console.status("[bold green]Checking inequalities..."):
            report = run_sweep(
                manifest.densities(), manifest.grid, workers, _scope_densities(manifest)
            )
    except (LpBoundsError, ValueError) as e:
        fail(e, code=1)

    if manifest_file is not None:
        manifest.write(manifest_file)

    if out == OutputFormat.CSV:
        emit(verdicts_to_csv(report.verdicts), output_file)
    elif out == OutputFormat.JSON:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "manifest": manifest.model_dump(mode="json"),
            "summary": {**summarize(report.verdicts), "exit_code": report.exit_code},
            "verdicts": [v.model_dump(mode="json") for v in report.verdicts],
            "scope_verdicts": [v.model_dump(mode="json") for v in report.scope_verdicts],
            "failures": [f.model_dump(mode="json") for f in report.failures],
        }
        emit(dump_json(payload), output_file)
    else:
        _print_summary(report)

    raise typer.Exit(code=report.exit_code)
