"""
Tests for the sweep runner, its report and run manifests.
"""

import json

import pytest

from lpbounds.density import AnalyticDensity, standard_catalog
from lpbounds.errors import NonConvergenceError, UsageError
from lpbounds.exponents import INF
from lpbounds.generator import GeneratorConfig
from lpbounds.inequalities import check_claim as real_check_claim
from lpbounds.manifest import RunManifest, multivariate_family
from lpbounds.multivariate import MultivariateDensity
from lpbounds.scope import bimodal_mixture, mixture_product, spike_mixture
from lpbounds.sweep import (
    CLAIM_GROUPS,
    EXIT_NONCONVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VIOLATION,
    SweepGrid,
    SweepReport,
    SweepRunner,
    TaskFailure,
    TaskStatus,
    parse_claims,
    run_density_checks,
    run_sweep,
    sweep_densities,
)
from lpbounds.verdicts import ClaimId, make_verdict

SMALL = dict(ps=["1", "2", "inf"], qs=["1", "2", "inf"], alphas=[1.0, 2.0])


def test_parse_claims_groups_and_duplicates():
    """Ids and groups expand to a de-duplicated list in report order."""
    assert parse_claims(["lemma4,lemma3", "lemma4"]) == [ClaimId.LEMMA3, ClaimId.LEMMA4]
    assert parse_claims(["all-nd"]) == list(CLAIM_GROUPS["all-nd"])
    assert len(parse_claims(["all"])) == len(ClaimId)


def test_parse_claims_unknown():
    """Unknown tokens list the accepted ones."""
    with pytest.raises(ValueError, match="Unknown claim 'lemma9'"):
        parse_claims(["lemma9"])


def test_grid_normalizes_exponents():
    """Exponents are stored in their canonical spelling."""
    grid = SweepGrid(ps=["1", 2, "Infinity"])
    assert grid.ps == ["1.0", "2.0", "inf"]


def test_catalog_sweep_holds():
    """Every default claim holds on the catalog over a small grid."""
    report = run_sweep(standard_catalog(), SweepGrid(**SMALL), workers=1)
    assert report.failures == []
    assert report.violations == []
    assert report.exit_code == EXIT_OK
    assert 0.0 < report.max_tightness() <= 1.0 + 1e-6
    claims = {v.claim_id for v in report.verdicts}
    assert ClaimId.PROPOSITION1 in claims
    assert ClaimId.FINITE_MEASURE in claims


def test_symmetric_only_claims_skip_asymmetric_densities(exponential):
    """Asymmetric densities get no symmetric-only verdicts."""
    grid = SweepGrid(claims=[ClaimId.PROPOSITION1, ClaimId.LEMMA4], **SMALL)
    verdicts = run_density_checks(exponential, grid)
    assert [v.claim_id for v in verdicts] == [ClaimId.LEMMA4]


def test_non_log_concave_density_gets_moment_claims_only():
    """Mixtures outside scope are checked only against the finite-moment claims."""
    grid = SweepGrid(claims=[ClaimId.LEMMA1, ClaimId.LEMMA4, ClaimId.LEMMA5], **SMALL)
    verdicts = run_density_checks(bimodal_mixture(3.0), grid)
    assert {v.claim_id for v in verdicts} == {ClaimId.LEMMA1}


def test_scope_violations_do_not_fail_the_sweep():
    """Out-of-scope verdicts are recorded; only finite-moment claims count."""
    grid = SweepGrid(claims=[ClaimId.LEMMA1, ClaimId.LEMMA5], **SMALL)
    report = run_sweep(
        [AnalyticDensity.gaussian(0.0, 1.0)], grid, scope_densities=[spike_mixture()]
    )
    assert any(
        v.claim_id is ClaimId.LEMMA5 and not v.holds for v in report.scope_verdicts
    )
    assert report.violations == []
    assert report.exit_code == EXIT_OK


def test_multivariate_checks():
    """Multivariate densities get the multivariate claims; mixtures only the lower bound."""
    grid = SweepGrid(claims=list(CLAIM_GROUPS["all-nd"]), **SMALL)
    verdicts = run_density_checks(MultivariateDensity.standard_gaussian(2), grid)
    assert {v.claim_id for v in verdicts} == set(CLAIM_GROUPS["all-nd"])
    assert all(v.holds for v in verdicts)
    mixed = run_density_checks(mixture_product(2), grid)
    assert {v.claim_id for v in mixed} == {ClaimId.LEMMA2}


def test_exit_code_precedence():
    """Violations beat non-convergence, which beats other failures."""
    bad = make_verdict(ClaimId.LEMMA4, 2.0, 1.0, exact=True)
    nonconv = TaskFailure(task_id=1, name="f", error_type="NonConvergenceError", message="x")
    other = TaskFailure(task_id=2, name="g", error_type="DomainError", message="y")
    assert SweepReport(verdicts=[bad], failures=[nonconv]).exit_code == EXIT_VIOLATION
    assert SweepReport(failures=[other, nonconv]).exit_code == EXIT_NONCONVERGENCE
    assert SweepReport(failures=[other]).exit_code == EXIT_USAGE
    scoped = TaskFailure(task_id=3, name="h", scope=True, error_type="DomainError", message="z")
    assert SweepReport(failures=[scoped]).exit_code == EXIT_OK


def test_out_of_range_alpha_is_not_a_violation():
    """A failed verdict at alpha < 1 is reported but not counted."""
    v = make_verdict(ClaimId.LEMMA5, 2.0, 1.0, exact=True, alpha=0.5)
    assert SweepReport(verdicts=[v]).exit_code == EXIT_OK


def test_failed_task_is_recorded(monkeypatch, gaussian):
    """A checker error fails its task and sets the exit code."""

    def boom(density, grid, scope=False, failures=None):
        raise NonConvergenceError("did not converge", best_estimate=1.0)

    monkeypatch.setattr("lpbounds.sweep.run_density_checks", boom)
    runner = SweepRunner(SweepGrid(**SMALL), workers=1)
    task_id = runner.queue(gaussian, name="normal")
    report = runner.run()
    task = runner.tasks[task_id]
    assert task.status is TaskStatus.FAILED
    assert task.error_type == "NonConvergenceError"
    assert report.failures[0].name == "normal"
    assert report.exit_code == EXIT_NONCONVERGENCE


def test_failed_check_keeps_other_verdicts(monkeypatch, gaussian):
    """One raising check is recorded on its own; the task's other verdicts still count."""

    def flaky(claim, f, p=None, q=None, alpha=None, interval=None):
        if claim is ClaimId.LEMMA3 and p is INF:
            raise NonConvergenceError("did not converge", best_estimate=1.0)
        if claim is ClaimId.LEMMA4:
            return make_verdict(ClaimId.LEMMA4, 2.0, 1.0, exact=True)
        return real_check_claim(claim, f, p, q, alpha, interval)

    monkeypatch.setattr("lpbounds.sweep.check_claim", flaky)
    grid = SweepGrid(claims=[ClaimId.LEMMA3, ClaimId.LEMMA4], **SMALL)
    report = run_sweep([gaussian], grid, workers=1)
    assert report.exit_code == EXIT_VIOLATION
    assert [v.claim_id for v in report.violations] == [ClaimId.LEMMA4]
    lemma3 = {v.p for v in report.verdicts if v.claim_id is ClaimId.LEMMA3}
    assert lemma3 == {"1.0", "2.0"}
    [failure] = report.failures
    assert failure.claim_id is ClaimId.LEMMA3
    assert failure.p == "inf"
    assert failure.error_type == "NonConvergenceError"


def test_failed_check_without_violation_exits_nonconvergence(monkeypatch, gaussian):
    """A lone non-converged check still fails the sweep with exit code 3."""

    def flaky(claim, f, p=None, q=None, alpha=None, interval=None):
        if p is INF:
            raise NonConvergenceError("did not converge")
        return real_check_claim(claim, f, p, q, alpha, interval)

    monkeypatch.setattr("lpbounds.sweep.check_claim", flaky)
    runner = SweepRunner(SweepGrid(claims=[ClaimId.LEMMA3], **SMALL), workers=1)
    task_id = runner.queue(gaussian, name="normal")
    report = runner.run()
    task = runner.tasks[task_id]
    assert task.status is TaskStatus.FAILED
    assert len(task.verdicts) == 2
    assert task.to_dict()["checkFailures"] == 1
    assert report.failures[0].describe() == "normal: lemma3(p=inf)"
    assert report.exit_code == EXIT_NONCONVERGENCE


def test_task_history(gaussian):
    """A task moves through queued, in-progress and completed."""
    runner = SweepRunner(SweepGrid(claims=[ClaimId.LEMMA4], **SMALL), workers=1)
    task_id = runner.queue(gaussian)
    runner.run()
    record = runner.tasks[task_id].to_dict()
    assert [h["status"] for h in record["statusHistory"]] == [
        "queued",
        "in-progress",
        "completed",
    ]
    assert record["verdicts"] == 1


@pytest.mark.slow
def test_worker_count_does_not_change_results(generator_config):
    """Process-pool and in-process runs give identical merged verdicts."""
    densities = sweep_densities(4, generator_config, include_catalog=False)
    grid = SweepGrid(**SMALL)
    serial = run_sweep(densities, grid, workers=1)
    parallel = run_sweep(densities, grid, workers=2)
    assert serial.verdicts == parallel.verdicts


def test_sweep_densities(generator_config):
    """The catalog comes first, then the generated stream."""
    densities = sweep_densities(3, generator_config)
    assert len(densities) == len(standard_catalog()) + 3
    assert len(sweep_densities(3, generator_config, include_catalog=False)) == 3


def test_manifest_round_trip(tmp_path):
    """A written manifest reads back and rebuilds the same densities."""
    manifest = RunManifest(
        command="check",
        density_specs=[{"family": "laplace", "params": {"loc": 0, "scale": 2}}],
        generator=GeneratorConfig(seed=8),
        random_count=2,
        grid=SweepGrid(**SMALL),
    )
    path = manifest.write(tmp_path / "manifest.json")
    loaded = RunManifest.read(path)
    assert loaded == manifest
    first, second = manifest.densities(), loaded.densities()
    assert len(first) == 3
    assert all(a == b for a, b in zip(first, second))


def test_manifest_embedded_in_report(tmp_path):
    """Reports wrap the manifest under a 'manifest' key."""
    manifest = RunManifest(command="check", include_catalog=True)
    path = tmp_path / "report.json"
    path.write_text(json.dumps({"manifest": manifest.model_dump(mode="json"), "verdicts": []}))
    assert len(RunManifest.read(path).densities()) == len(standard_catalog())


def test_manifest_schema_version(tmp_path):
    """Other schema versions are refused."""
    path = tmp_path / "old.json"
    path.write_text(json.dumps({"schema_version": 0, "command": "check"}))
    with pytest.raises(UsageError, match="schema version"):
        RunManifest.read(path)
    missing = tmp_path / "missing.json"
    with pytest.raises(UsageError, match="Cannot read manifest"):
        RunManifest.read(missing)


def test_multivariate_family_selection():
    """Named selections split the standard families."""
    assert len(multivariate_family("gaussian-nd", 2, 0)) == 3
    assert len(multivariate_family("product-nd", 2, 0)) == 4
    assert len(multivariate_family("all-nd", 3, 0)) == 7
    with pytest.raises(UsageError):
        multivariate_family("mixture-nd", 2, 0)
