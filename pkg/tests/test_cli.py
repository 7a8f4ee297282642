"""
Tests for the command-line tool.

JSON reports are written with --output-file and read back from disk so that
log records on stderr never mix with the parsed output.
"""

import json
import math

import pytest

from lpbounds import __version__
from lpbounds.cli import app
from lpbounds.config import get_settings
from lpbounds.verdicts import make_verdict

GAUSSIAN = {"family": "gaussian", "params": {"mu": 0.0, "sigma": 1.0}}
EXPONENTIAL = {"family": "exponential", "params": {"rate": 1.0}}


def read_json(path):
    return json.loads(path.read_text())


def test_version(runner):
    """Both the flag and the command print the version."""
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_info(runner):
    """The configuration table reports consistent tolerances."""
    result = runner.invoke(app, ["info"])
    assert result.exit_code == 0
    assert "Tolerances are consistent" in result.output


def test_bad_log_level(runner):
    """An unknown log level is a parameter error."""
    result = runner.invoke(app, ["--log-level", "chatty", "version"])
    assert result.exit_code == 2


def test_constants_json(runner):
    """C_2 = sqrt(2 pi e) and D_2 = sqrt(2); D(n) is n/a in one dimension."""
    result = runner.invoke(
        app, ["constants", "--alpha", "2", "--n", "1", "--n", "2", "--out", "json"]
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    row = data["alpha"][0]
    assert row["c_alpha"] == pytest.approx(math.sqrt(2.0 * math.pi * math.e), rel=1e-12)
    assert row["d_alpha"] == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert data["n"][0]["d_n"] is None
    assert data["n"][1]["d_n"] == pytest.approx(math.e**2 / (2.0 * math.sqrt(2.0)), rel=1e-12)


def test_constants_table(runner):
    """The default output is a table with both alphas."""
    result = runner.invoke(app, ["constants"])
    assert result.exit_code == 0
    assert "One-dimensional constants" in result.output


def test_constants_rejects_non_positive_alpha(runner):
    """alpha <= 0 exits with a usage error."""
    result = runner.invoke(app, ["constants", "--alpha", "0"])
    assert result.exit_code == 1
    assert "Error" in result.output


def test_eval_lp_norm(runner, write_spec, tmp_path):
    """eval --lp 2 on N(0, 1) reports (4 pi)^(-1/4)."""
    spec = write_spec(GAUSSIAN)
    report = tmp_path / "eval.json"
    result = runner.invoke(
        app, ["eval", str(spec), "--lp", "2", "--supnorm", "--entropy", "-o", str(report)]
    )
    assert result.exit_code == 0, result.output
    data = read_json(report)
    values = data["values"]
    assert values[0]["value"] == pytest.approx(0.5311259661, rel=1e-10)
    assert values[1]["value"] == pytest.approx(0.3989422804, rel=1e-10)
    assert values[2]["value"] == pytest.approx(1.4189385332, rel=1e-10)
    assert data["manifest"]["command"] == "eval"


def test_eval_table(runner, write_spec):
    """The table view names the density."""
    spec = write_spec(EXPONENTIAL)
    result = runner.invoke(app, ["eval", str(spec), "--sigma", "2", "--out", "table"])
    assert result.exit_code == 0
    assert "exponential" in result.output


def test_eval_bad_spec(runner, write_spec):
    """A malformed spec exits 1 with the error location."""
    spec = write_spec({"family": "gaussian", "params": {"mean": 0}})
    result = runner.invoke(app, ["eval", str(spec), "--lp", "2"])
    assert result.exit_code == 1
    assert "Error" in result.output


def test_check_tightened_sup_bound(runner, write_spec, tmp_path):
    """The tightened alpha = 2 sup-norm bound holds (with equality) for Exp(1)."""
    spec = write_spec(EXPONENTIAL)
    report = tmp_path / "check.json"
    result = runner.invoke(
        app,
        [
            "check",
            str(spec),
            "--claims",
            "lemma5",
            "--alpha",
            "2",
            "--tightened",
            "--out",
            "json",
            "-o",
            str(report),
        ],
    )
    assert result.exit_code == 0, result.output
    data = read_json(report)
    assert [v["claim_id"] for v in data["verdicts"]] == ["lemma5-tightened"]
    assert data["verdicts"][0]["tightness"] == pytest.approx(1.0, abs=1e-9)
    assert data["summary"]["exit_code"] == 0


def test_check_multivariate_family(runner, tmp_path):
    """theorem2 holds on the Gaussian family in two and three dimensions."""
    report = tmp_path / "nd.json"
    result = runner.invoke(
        app,
        [
            "check",
            "--claims",
            "theorem2",
            "--family",
            "gaussian-nd",
            "--n",
            "2",
            "--n",
            "3",
            "--p",
            "2",
            "--p",
            "inf",
            "--q",
            "1",
            "--out",
            "json",
            "-o",
            str(report),
        ],
    )
    assert result.exit_code == 0, result.output
    verdicts = read_json(report)["verdicts"]
    assert {v["n"] for v in verdicts} == {2, 3}
    assert all(v["holds"] for v in verdicts)


def test_check_csv(runner, write_spec, tmp_path):
    """CSV reports use the fixed column order."""
    spec = write_spec(GAUSSIAN)
    report = tmp_path / "check.csv"
    result = runner.invoke(
        app,
        ["check", str(spec), "--claims", "lemma3", "--p", "2", "--out", "csv", "-o", str(report)],
    )
    assert result.exit_code == 0
    lines = report.read_text().strip().split("\n")
    assert lines[0].startswith("claim_id,family,params_digest,p,q,alpha")
    assert len(lines) == 2


def test_check_needs_densities(runner):
    """Without any density source the command is a usage error."""
    result = runner.invoke(app, ["check", "--claims", "lemma4"])
    assert result.exit_code == 1
    assert "Nothing to check" in result.output


def test_check_unknown_claim(runner, write_spec):
    """Unknown claims exit 1."""
    result = runner.invoke(app, ["check", str(write_spec(GAUSSIAN)), "--claims", "lemma9"])
    assert result.exit_code == 1


def test_check_tolerance_override(runner, write_spec, tmp_path):
    """--tol is recorded in the manifest."""
    report = tmp_path / "tol.json"
    result = runner.invoke(
        app,
        [
            "check",
            str(write_spec(GAUSSIAN)),
            "--claims",
            "lemma4",
            "--tol",
            "0.001",
            "--out",
            "json",
            "-o",
            str(report),
        ],
    )
    assert result.exit_code == 0
    data = read_json(report)
    assert data["manifest"]["tolerances"]["verdict_tol"] == pytest.approx(1e-3)
    assert data["verdicts"][0]["tol"] == pytest.approx(1e-3)


def test_check_replay_reproduces_report(runner, tmp_path):
    """Replaying a manifest gives identical verdicts."""
    manifest = tmp_path / "manifest.json"
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    args = ["--out", "json"]
    result = runner.invoke(
        app,
        ["check", "--catalog", "--random", "2", "--claims", "lemma4,lemma3", "--p", "2"]
        + args
        + ["-o", str(first), "--manifest", str(manifest)],
    )
    assert result.exit_code == 0, result.output
    result = runner.invoke(app, ["check", "--replay", str(manifest), *args, "-o", str(second)])
    assert result.exit_code == 0, result.output
    assert read_json(first)["verdicts"] == read_json(second)["verdicts"]
    result = runner.invoke(app, ["check", "--replay", str(first), *args, "-o", str(second)])
    assert result.exit_code == 0
    assert read_json(first)["verdicts"] == read_json(second)["verdicts"]


def test_check_violation_exit_code(runner, write_spec, monkeypatch):
    """Any violated verdict exits 2."""

    def violated(densities, grid=None, workers=None, scope_densities=()):
        from lpbounds.sweep import SweepReport
        from lpbounds.verdicts import ClaimId

        return SweepReport(verdicts=[make_verdict(ClaimId.LEMMA4, 2.0, 1.0, exact=True)])

    monkeypatch.setattr("lpbounds.cli.check.run_sweep", violated)
    result = runner.invoke(app, ["check", str(write_spec(GAUSSIAN)), "--claims", "lemma4"])
    assert result.exit_code == 2


def test_search_json(runner, tmp_path):
    """Every exponential is tight for the tightened sup bound."""
    report = tmp_path / "search.json"
    witness = tmp_path / "witness.json"
    result = runner.invoke(
        app,
        [
            "search",
            "lemma5-tightened",
            "--family",
            "exponential",
            "--budget",
            "30",
            "--restarts",
            "1",
            "--witness-file",
            str(witness),
            "--out",
            "json",
            "-o",
            str(report),
        ],
    )
    assert result.exit_code == 0, result.output
    data = read_json(report)
    assert data["result"]["best_ratio"] == pytest.approx(1.0, abs=1e-9)
    assert read_json(witness)["family"] == "exponential"


def test_search_counterexample_exit_code(runner, tmp_path, monkeypatch):
    """A ratio above 1 + tol exits 4 and writes the witness."""

    def fake_check(claim, f, p=None, q=None, alpha=None):
        return make_verdict(claim, 3.0, 1.0, exact=True, density=f)

    monkeypatch.setattr("lpbounds.search.check_claim", fake_check)
    witness = tmp_path / "cx.json"
    result = runner.invoke(
        app,
        [
            "search",
            "lemma4",
            "--family",
            "pll2",
            "--budget",
            "10",
            "--restarts",
            "1",
            "--witness-file",
            str(witness),
        ],
    )
    assert result.exit_code == 4
    assert "pll" in read_json(witness)


def test_search_rejects_unsearchable_claim(runner):
    """finite-measure cannot be searched."""
    result = runner.invoke(app, ["search", "finite-measure", "--family", "pll2"])
    assert result.exit_code == 1


def test_scan_csv(runner, write_spec, tmp_path):
    """One CSV row per (p, q, alpha) grid point."""
    spec = write_spec(GAUSSIAN)
    out = tmp_path / "scan.csv"
    result = runner.invoke(
        app,
        ["scan", "theorem1", str(spec), "--p", "1", "--p", "2", "--q", "1", "-o", str(out)],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 3
    assert all(row.endswith("true") for row in lines[1:])


def test_settings_restored_after_tolerance_override():
    """The autouse fixture leaves default tolerances for the next test."""
    assert get_settings().verdict_tol == 1e-6
