"""
Tests for the workflow services: knobs, point reports, sweeps, optimization,
manifests and the built-in validation suite.

Notes:
    - Sweeps run through the Celery group with CELERY_TASK_ALWAYS_EAGER, so the
      parallel path is exercised in-process.
    - Manifest recording needs the database; everything else is pure compute.
"""

import json
import math
from pathlib import Path

import pytest

from pairsim import analytic, circuits
from pairsim.exceptions import InvalidSpecError, RefinementNeededError, SweepError
from pairsim.model import DrivenPhase, ModelSpec, StaticPhase
from pairsim.models import SimulationRun
from pairsim.services import (
    OUTPUTS,
    CircuitService,
    ManifestService,
    OptimizationService,
    StationaryService,
    SweepService,
    SweepSpec,
    ValidationService,
    apply_knob,
    base_from_dict,
    base_to_dict,
    compute_point,
    evaluate_model,
    peak_model,
    reference_circuits,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_json(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


# ---------- FIXTURES ----------

@pytest.fixture
def static():
    return ModelSpec.from_dict(fixture_json("model_static"))


@pytest.fixture
def driven():
    return ModelSpec.from_dict(fixture_json("model_driven"))


@pytest.fixture
def small_sweep(static):
    """Three-point mu1 sweep around the optimum."""
    return SweepSpec(base=static, knob="mu1", grid=(2.0, 7.7314, 20.0))


# ---------- KNOBS ----------

def test_model_field_knob(static):
    assert apply_knob(static, "gamma_phi", 0.5).gamma_phi == 0.5


def test_phase_knobs(static, driven):
    assert apply_knob(static, "theta1", 1.2).phase1 == StaticPhase(1.2)
    assert apply_knob(driven, "phi0", 0.4).phase1 == DrivenPhase(200.0, 0.4)
    with pytest.raises(InvalidSpecError):
        apply_knob(driven, "theta1", 1.0)
    with pytest.raises(InvalidSpecError):
        apply_knob(static, "phi0", 1.0)


def test_omega_knob_moves_the_drive(driven):
    moved = apply_knob(driven, "Omega", 300.0)
    assert moved.omega_a1 == moved.omega_a2 == 150.0
    assert moved.phase1.omega == 300.0


@pytest.mark.parametrize("ratio, gamma_phi", [(2.0, 0.0), (1.0, 0.5), (0.5, 1.5)])
def test_ratio_knob(static, ratio, gamma_phi):
    spec = apply_knob(static, "ratio", ratio)
    assert spec.gamma_phi == pytest.approx(gamma_phi)
    assert spec.gamma1 / spec.Gamma2 == pytest.approx(ratio)


@pytest.mark.parametrize("value", [0.0, 2.5])
def test_ratio_knob_range(static, value):
    with pytest.raises(InvalidSpecError):
        apply_knob(static, "ratio", value)


def test_unknown_knobs(static):
    with pytest.raises(InvalidSpecError):
        apply_knob(static, "temperature", 1.0)
    with pytest.raises(InvalidSpecError):
        apply_knob(reference_circuits()["charge_lc"], "Phi_c", 0.1)


def test_shared_circuit_aliases():
    spec = apply_knob(reference_circuits()["charge_direct"], "Phi_x", 0.3)
    assert spec.Phi_x1 == spec.Phi_x2 == 0.3
    spec = apply_knob(reference_circuits()["flux_direct"], "Phi_c", 0.18)
    assert spec.Phi_c1 == spec.Phi_c2 == 0.18


def test_base_from_dict_forms(static):
    assert base_from_dict({"model": static.to_dict()}) == static
    assert base_from_dict(static.to_dict()) == static
    circuit = reference_circuits()["charge_lc"]
    assert base_from_dict({"circuit": circuit.to_dict()}) == circuit
    assert base_from_dict(circuit.to_dict()) == circuit
    assert base_to_dict(circuit) == {"circuit": circuit.to_dict()}
    with pytest.raises(InvalidSpecError):
        base_from_dict([1, 2])


def test_reference_circuits_match_fixture_files():
    for kind, spec in reference_circuits().items():
        assert circuits.circuit_from_dict(fixture_json(kind)) == spec


# ---------- POINT REPORTS ----------

def test_evaluate_model_at_peak():
    report = evaluate_model(peak_model())
    assert report.C_num == pytest.approx(analytic.C_LIMIT, abs=1e-8)
    assert report.F_num == pytest.approx(analytic.F_LIMIT, abs=1e-8)
    assert report.C_strong == pytest.approx(report.C_num, abs=1e-8)
    assert report.C_weak is None
    assert report.branch_valid
    assert set(report.to_dict()) >= set(OUTPUTS)


def test_evaluate_driven_model(driven):
    report = evaluate_model(driven)
    assert report.C_weak == pytest.approx(analytic.C_LIMIT, abs=1e-5)
    assert report.C_num == pytest.approx(report.C_weak, abs=1e-8)
    assert report.C_strong is None


def test_stationary_service_report(static):
    report = StationaryService.solve(static)
    assert report["method"] == "linear-solve"
    assert report["C"] == pytest.approx(report["closed_form"]["C"], abs=1e-8)
    assert report["optimum"]["mu1_opt"] == pytest.approx(7.7314, rel=1e-4)
    assert report["model"] == static.to_dict()


def test_driven_report_shows_the_static_coupling_floor(driven):
    """A driven model reaches C_max with a mu1 far below what a static phase needs."""
    report = StationaryService.solve(driven)
    bound = report["static_mu1_bound"]
    assert bound == pytest.approx(200.0 / (8 * (math.sqrt(5) + 1) * 0.5))
    assert driven.mu1 < bound / 10
    assert report["C"] == pytest.approx(analytic.C_LIMIT, abs=1e-5)


def test_circuit_service_optimal_cqed():
    report = CircuitService.evaluate(reference_circuits()["cqed"], optimal=True)
    assert report["kind"] == "cqed"
    assert report["setting"]["knob"] == "lambda_d"
    assert report["spec"]["lambda_d"] == pytest.approx(77.25e6, rel=1e-3)
    assert report["C_num"] == pytest.approx(analytic.C_LIMIT, rel=0.02)
    names = [c["name"] for c in report["conditions"]]
    assert "|Delta| >> |g|" in names


def test_circuit_service_without_tuning():
    report = CircuitService.evaluate(reference_circuits()["charge_lc"])
    assert "setting" not in report
    assert "conditions" not in report
    assert 0.0 <= report["C_num"] < analytic.C_LIMIT


# ---------- SWEEPS ----------

def test_sweep_spec_from_fixture():
    sweep = SweepSpec.from_dict(fixture_json("sweep_ratio"))
    assert sweep.knob == "ratio"
    assert len(sweep.grid) == 10
    assert sweep.grid[0] == pytest.approx(0.2) and sweep.grid[-1] == pytest.approx(2.0)
    assert sweep.optimal_mu1
    assert SweepSpec.from_dict(sweep.to_dict()) == sweep


def test_log_grid():
    sweep = SweepSpec.from_dict(fixture_json("sweep_mu1"))
    assert len(sweep.grid) == 24
    assert sweep.grid[1] / sweep.grid[0] == pytest.approx(sweep.grid[-1] / sweep.grid[-2])
    assert sweep.outputs == OUTPUTS


@pytest.mark.parametrize(
    "data",
    [
        {"base": {"model": {}}, "knob": "mu1", "grid": [1.0]},
        {"knob": "mu1", "grid": [1.0]},
        {"base": {"circuit": {"kind": "charge_lc", "E_J0": 1, "Phi_x": 0.2, "gamma1": 1}}, "knob": "Phi_x", "grid": [0.1], "optimal_mu1": True},
        {"base": {"mu1": 1, "omega_a1": 1, "omega_a2": 1, "gamma1": 1}, "knob": "mu1", "grid": []},
        {"base": {"mu1": 1, "omega_a1": 1, "omega_a2": 1, "gamma1": 1}, "knob": "mu1", "grid": {"start": 0, "stop": 1, "num": 3, "log": True}},
        {"base": {"mu1": 1, "omega_a1": 1, "omega_a2": 1, "gamma1": 1}, "knob": "mu1", "grid": [1.0], "outputs": ["purity"]},
        {"base": {"mu1": 1, "omega_a1": 1, "omega_a2": 1, "gamma1": 1}, "knob": "mu1", "grid": [1.0], "step": 2},
    ],
)
def test_invalid_sweep_specs(data):
    with pytest.raises(InvalidSpecError):
        SweepSpec.from_dict(data)


def test_compute_point_row(small_sweep):
    row = compute_point(small_sweep, 1, 7.7314)
    assert row["index"] == 1
    assert row["mu1"] == 7.7314
    assert row["C_num"] == pytest.approx(analytic.C_LIMIT, abs=1e-6)
    assert row["method"] == "linear-solve"
    assert row["error"] is None


def test_compute_point_records_failures(static):
    sweep = SweepSpec(base=static, knob="ratio", grid=(3.0,))
    row = compute_point(sweep, 0, 3.0)
    assert row["C_num"] is None
    assert row["error"].startswith("InvalidSpecError")


def test_parallel_and_serial_sweeps_agree(small_sweep):
    parallel = SweepService.run(small_sweep, parallel=True)
    serial = SweepService.run(small_sweep, parallel=False)
    assert [r["index"] for r in parallel.rows] == [0, 1, 2]
    assert parallel.rows == serial.rows
    assert parallel.methods == ["linear-solve"] * 3
    assert parallel.failed == 0


def test_sweep_keeps_going_past_failures(static):
    sweep = SweepSpec(base=static, knob="ratio", grid=(1.0, 3.0, 2.0), optimal_mu1=True)
    result = SweepService.run(sweep)
    assert result.failed == 1
    assert result.rows[1]["error"]
    assert result.rows[2]["C_num"] == pytest.approx(analytic.C_LIMIT, abs=1e-6)


def test_sweep_with_every_point_failing(static):
    sweep = SweepSpec(base=static, knob="ratio", grid=(3.0, 4.0))
    with pytest.raises(SweepError) as excinfo:
        SweepService.run(sweep)
    assert len(excinfo.value.rows) == 2


def test_optimal_ratio_sweep_follows_the_curve():
    """With mu1 re-optimized at each point, C traces C_max(G1/G2)."""
    result = SweepService.run(SweepSpec.from_dict(fixture_json("sweep_ratio")), parallel=False)
    for row in result.rows:
        assert row["C_num"] == pytest.approx(analytic.c_max_for_ratio(row["ratio"]), abs=1e-6)


# ---------- OPTIMIZATION ----------

def test_optimize_mu1_matches_closed_form(static):
    result = OptimizationService.optimize_knob(static, "mu1")
    assert result.value == pytest.approx(result.closed_form_value, rel=1e-3)
    assert result.C == pytest.approx(analytic.C_LIMIT, abs=1e-8)
    assert result.F == pytest.approx(analytic.F_LIMIT, abs=1e-6)
    assert not result.at_boundary
    assert abs(result.relative_gap) < 1e-3
    assert result.to_dict()["closed_form"]["C_max"] == pytest.approx(analytic.C_LIMIT)


def test_optimize_circuit_knob():
    spec = reference_circuits()["flux_coupler"]
    result = OptimizationService.optimize_knob(spec, "Phi_3", bounds=(0.05, 0.24), scan_points=21)
    assert result.closed_form_value == pytest.approx(0.1440, abs=1e-4)
    assert result.value == pytest.approx(result.closed_form_value, abs=1e-3)


def test_optimize_reports_boundary(static):
    result = OptimizationService.optimize_knob(static, "mu1", bounds=(0.5, 2.0), scan_points=11)
    assert result.at_boundary
    assert result.value == pytest.approx(2.0, abs=1e-5)


def test_optimize_needs_bounds_for_other_knobs(static):
    with pytest.raises(InvalidSpecError):
        OptimizationService.optimize_knob(static, "gamma_phi")
    with pytest.raises(InvalidSpecError):
        OptimizationService.optimize_knob(static, "mu1", bounds=(2.0, 1.0))


def test_multimodal_profile_needs_refinement(static, mocker):
    mocker.patch.object(
        OptimizationService, "concurrence_at", side_effect=lambda base, knob, x: math.cos(x) ** 2
    )
    with pytest.raises(RefinementNeededError) as excinfo:
        OptimizationService.optimize_knob(static, "mu1", bounds=(0.0, 10.0), scan_points=41)
    assert len(excinfo.value.scan["xs"]) == 41


# ---------- MANIFESTS ----------

def test_manifest_hash_ignores_timestamp(static):
    inputs = {"model": static.to_dict()}
    first = ManifestService.build("stationary", inputs, methods=["linear-solve"])
    second = ManifestService.build("stationary", inputs, methods=["linear-solve"])
    assert first.manifest_hash == second.manifest_hash
    assert first.input_hash == ManifestService.input_hash(inputs)
    other = ManifestService.build("stationary", {"model": {**static.to_dict(), "mu1": 1.0}})
    assert other.input_hash != first.input_hash


def test_manifest_hash_tracks_tolerances(static, settings):
    inputs = {"model": static.to_dict()}
    before = ManifestService.build("stationary", inputs)
    settings.PAIRSIM = {"RTOL": 1e-6}
    after = ManifestService.build("stationary", inputs)
    assert after.tolerances["RTOL"] == 1e-6
    assert after.manifest_hash != before.manifest_hash


def test_manifest_write(static, tmp_path):
    manifest = ManifestService.build("stationary", {"model": static.to_dict()}, outputs=["stationary.json"])
    path = ManifestService.write(manifest, tmp_path / "run")
    data = json.loads(path.read_text())
    assert path.name == "manifest.json"
    assert data["manifest_hash"] == manifest.manifest_hash
    assert data["outputs"] == ["stationary.json"]
    assert "timestamp" in data


@pytest.mark.django_db
def test_manifest_record(static):
    inputs = {"model": static.to_dict()}
    manifest = ManifestService.build("stationary", inputs, methods=["linear-solve"])
    run = ManifestService.record(manifest, inputs, summary={"C": 0.3})
    assert SimulationRun.objects.count() == 1
    assert run.manifest_hash == manifest.manifest_hash
    assert run.summary == {"C": 0.3}
    assert str(run).startswith("stationary ")


# ---------- VALIDATION SUITE ----------

@pytest.mark.slow
def test_validation_suite_passes():
    results = ValidationService(seed=1).run()
    assert len(results) == 12
    failed = [r.to_dict() for r in results if not r.passed]
    assert failed == []


def test_validation_check_failure_is_reported(mocker):
    service = ValidationService()
    mocker.patch.object(
        service, "checks", return_value=[("broken", mocker.Mock(side_effect=SweepError("boom")))]
    )
    (result,) = service.run()
    assert not result.passed
    assert result.detail == "SweepError: boom"
