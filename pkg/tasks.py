"""
Invoke tasks for lpbounds project management.

Run `inv --list` to see all available tasks.
"""

from invoke import task
import shutil
from pathlib import Path


@task
def install(c):
    """Install the package."""
    print("Installing lpbounds...")
    c.run("uv pip install -e .")


@task
def dev_install(c):
    """Install with development dependencies."""
    print("Installing lpbounds with development dependencies...")
    c.run("uv pip install -e '.[dev,docs]'")


@task
def test(c, verbose=True, coverage=True, parallel=False):
    """
    Run tests.

    Args:
        verbose: Run tests in verbose mode (default: True)
        coverage: Generate coverage report (default: True)
        parallel: Run tests across CPUs with pytest-xdist (default: False)
    """
    print("Running tests...")
    cmd_parts = ["uv", "run", "pytest"]

    if verbose:
        cmd_parts.append("-v")

    if parallel:
        cmd_parts.extend(["-n", "auto"])

    if coverage:
        cmd_parts.extend([
            "--cov=lpbounds",
            "--cov-report=html",
            "--cov-report=term"
        ])

    c.run(" ".join(cmd_parts))


@task
def test_quick(c, verbose=False):
    """
    Run the test suite without the slow searches and sweeps.

    Args:
        verbose: Run tests in verbose mode (default: False)
    """
    print("Running quick tests...")
    cmd_parts = ["uv", "run", "pytest", "-m", '"not slow"', "-n", "auto"]
    if verbose:
        cmd_parts.append("-v")
    c.run(" ".join(cmd_parts))


@task
def stochastic(c):
    """Run only the Monte Carlo tests."""
    c.run('uv run pytest -m stochastic -v')


@task
def type_check(c):
    """Run mypy on the package."""
    c.run("mypy lpbounds")


@task
def lint(c):
    """Run linting checks."""
    print("Running linting checks...")
    print("\n→ Running ruff...")
    c.run("ruff check lpbounds tests", warn=True)

    print("\n→ Running mypy...")
    c.run("mypy lpbounds", warn=True)


@task
def format(c, check=False):
    """
    Format code with black and ruff.

    Args:
        check: Only check formatting without making changes (default: False)
    """
    print("Formatting code...")

    if check:
        print("\n→ Checking formatting with black...")
        c.run("black --check lpbounds tests")
        print("\n→ Checking with ruff...")
        c.run("ruff check lpbounds tests")
    else:
        print("\n→ Formatting with black...")
        c.run("black lpbounds tests")
        print("\n→ Fixing with ruff...")
        c.run("ruff check --fix lpbounds tests")


@task
def docs(c, open_browser=False):
    """
    Build documentation.

    Args:
        open_browser: Open documentation in browser after building (default: False)
    """
    print("Building documentation...")
    c.run("uv run sphinx-build -M html docs docs/_build", pty=True)

    docs_path = Path("docs/_build/html/index.html").absolute()
    print("\n✓ Documentation built in docs/_build/html/")
    print(f"  View at: file://{docs_path}")

    if open_browser:
        import webbrowser
        webbrowser.open(f"file://{docs_path}")


@task
def clean(c):
    """Clean build artifacts."""
    print("Cleaning build artifacts...")

    dirs_to_remove = [
        "build",
        "dist",
        "docs/_build",
        ".pytest_cache",
        ".hypothesis",
        "htmlcov",
    ]

    for dir_name in dirs_to_remove:
        dir_path = Path(dir_name)
        if dir_path.exists():
            print(f"  Removing {dir_name}/")
            shutil.rmtree(dir_path, ignore_errors=True)

    for egg_info in Path(".").glob("*.egg-info"):
        print(f"  Removing {egg_info}/")
        shutil.rmtree(egg_info, ignore_errors=True)

    for pycache in Path(".").rglob("__pycache__"):
        shutil.rmtree(pycache, ignore_errors=True)

    print("\n✓ Clean complete")


@task
def cli(c):
    """Show CLI help."""
    c.run("uv run lpbounds --help")


@task
def version(c):
    """Show lpbounds version."""
    c.run("uv run lpbounds version")


@task
def info(c):
    """Show the numerical configuration."""
    c.run("uv run lpbounds info")


@task
def constants(c, alpha="1 2", dims="2 3 5"):
    """
    Print the bound constants.

    Args:
        alpha: Space-separated moment orders (default: "1 2")
        dims: Space-separated dimensions (default: "2 3 5")
    """
    args = [f"--alpha {a}" for a in alpha.split()] + [f"--n {n}" for n in dims.split()]
    c.run(f"uv run lpbounds constants {' '.join(args)}", pty=True)


@task
def sweep(c, random=200, seed=42, workers=4, claims="default", output="sweep.csv"):
    """
    Run the default claims over the catalog and generated densities.

    Writes the CSV report to ``output`` and the run manifest next to it, so the
    sweep can be replayed with ``lpbounds check --replay``.

    Args:
        random: Number of generated PLL densities (default: 200)
        seed: Generator seed (default: 42)
        workers: Worker processes (default: 4)
        claims: Claim ids or groups (default: "default")
        output: CSV report path (default: sweep.csv)
    """
    manifest = Path(output).with_suffix(".manifest.json")
    print(f"Sweeping {random} generated densities plus the catalog...")
    cmd = (
        f"uv run lpbounds check --catalog --random {random} --seed {seed} "
        f"--workers {workers} --claims {claims} "
        "--p 1 --p 2 --p 4 --p inf --q 1 --q 2 --q inf --alpha 1 --alpha 2 --alpha 3 "
        f"--out csv -o {output} --manifest {manifest}"
    )
    result = c.run(cmd, warn=True)
    if result.ok:
        print(f"\n✓ Every verdict holds. Report: {output}")
    else:
        print(f"\n✗ Sweep exited with code {result.exited}. Report: {output}")
    print(f"  Manifest: {manifest}")


@task
def search(c, claim="lemma4", family="pll3", budget=2000, restarts=8, seed=42):
    """
    Maximize the tightness ratio of one claim.

    Args:
        claim: Claim id (default: lemma4)
        family: pll<k>, a catalog family or "catalog" (default: pll3)
        budget: Evaluations per restart (default: 2000)
        restarts: Random restarts (default: 8)
        seed: Search seed (default: 42)
    """
    c.run(
        f"uv run lpbounds search {claim} --family {family} --budget {budget} "
        f"--restarts {restarts} --seed {seed} --witness-file {claim}-{family}-witness.json",
        pty=True,
    )


@task(pre=[format, lint, test])
def check(c):
    """Run all checks (format, lint, test)."""
    print("\n✓ All checks passed!")


@task
def release(c):
    """Build the source and wheel distributions."""
    print("Building lpbounds release...")

    print("\n→ Running tests...")
    test(c)

    print("\n→ Building package...")
    c.run("uv pip install build")
    c.run("python -m build")

    print("\n✓ Release prepared in dist/")
