"""
End-to-end tests of the pairsim REST endpoints.

What this file covers:
- The compute endpoints (stationary, circuits, sweeps, optimize) return the
  service reports as JSON.
- Error mapping: malformed specs give 400, well-formed inputs that cannot be
  computed give 422 with the exception name.
- `record=true` stores a SimulationRun that the read-only runs endpoint lists.

Notes:
- Router basenames are "stationary", "circuits", "sweeps", "optimize" and
  "runs"; `reverse()` uses "<basename>-list" / "<basename>-detail".
- Sweeps run through eager Celery tasks.
"""

import json
import math
from pathlib import Path

import pytest
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient

from pairsim import analytic
from pairsim.models import SimulationRun
from pairsim.services import OptimizationService

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

pytestmark = pytest.mark.django_db


def fixture_json(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


# ----------------------------
# Fixtures
# ----------------------------

@pytest.fixture
def api_client() -> APIClient:
    """DRF client; the API needs no authentication."""
    return APIClient()


@pytest.fixture
def static_model():
    return fixture_json("model_static")


# ----------------------------
# Stationary
# ----------------------------

def test_stationary_report(api_client, static_model):
    res = api_client.post(reverse("stationary-list"), {"model": static_model}, format="json")
    assert res.status_code == status.HTTP_200_OK
    body = res.json()
    assert body["method"] == "linear-solve"
    assert body["frame"] == "lab"
    assert body["C"] == pytest.approx(analytic.C_LIMIT, abs=1e-6)
    assert body["closed_form"]["branch_valid"] is True
    assert "run" not in body


def test_stationary_forced_method(api_client, static_model):
    res = api_client.post(
        reverse("stationary-list"), {"model": static_model, "method": "null-space"}, format="json"
    )
    assert res.status_code == status.HTTP_200_OK
    assert res.json()["method"] == "null-space"


def test_driven_model_is_reported_in_rotating_frame(api_client):
    res = api_client.post(
        reverse("stationary-list"), {"model": fixture_json("model_driven")}, format="json"
    )
    assert res.status_code == status.HTTP_200_OK
    assert res.json()["frame"] == "rotating"


@pytest.mark.parametrize(
    "model",
    [
        {"mu1": -1.0, "omega_a1": 1.0, "omega_a2": 1.0, "gamma1": 1.0},
        {"mu1": 1.0, "omega_a1": 1.0, "gamma1": 1.0},
        {"mu1": 1.0, "omega_a1": 0.0, "omega_a2": 1.0, "gamma1": 1.0},
        {"mu1": 1.0, "omega_a1": 1.0, "omega_a2": 1.0, "gamma1": 1.0, "phase1": {"spin": 1}},
    ],
)
def test_stationary_rejects_bad_models(api_client, model):
    res = api_client.post(reverse("stationary-list"), {"model": model}, format="json")
    assert res.status_code == status.HTTP_400_BAD_REQUEST


def test_stationary_unknown_method(api_client, static_model):
    res = api_client.post(
        reverse("stationary-list"), {"model": static_model, "method": "newton"}, format="json"
    )
    assert res.status_code == status.HTTP_400_BAD_REQUEST


def test_stationary_without_relaxation_is_422(api_client, static_model):
    model = {**static_model, "gamma1": 0.0}
    res = api_client.post(reverse("stationary-list"), {"model": model}, format="json")
    assert res.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert res.json()["error"] == "NoUniqueSteadyStateError"


def test_off_resonant_drive_is_422(api_client):
    model = fixture_json("model_driven")
    model["phase1"] = {"driven": {"omega": 150.0, "phi0": 0.0}}
    res = api_client.post(reverse("stationary-list"), {"model": model}, format="json")
    assert res.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert res.json()["error"] == "UnsupportedFrameError"


# ----------------------------
# Circuits
# ----------------------------

def test_circuit_optimal_cqed(api_client):
    res = api_client.post(
        reverse("circuits-list"), {"spec": fixture_json("cqed"), "optimal": True}, format="json"
    )
    assert res.status_code == status.HTTP_200_OK
    body = res.json()
    assert body["setting"]["knob"] == "lambda_d"
    assert body["C_num"] == pytest.approx(analytic.C_LIMIT, rel=0.02)
    locked = next(c for c in body["conditions"] if c["name"] == "Omega_tilde = 2 E_J")
    assert locked["ratio"] is None
    assert locked["ok"] is True


def test_circuit_unknown_kind(api_client):
    res = api_client.post(reverse("circuits-list"), {"spec": {"kind": "transmon"}}, format="json")
    assert res.status_code == status.HTTP_400_BAD_REQUEST


def test_circuit_without_solution_is_422(api_client):
    spec = {**fixture_json("charge_direct"), "J": 20e9}
    res = api_client.post(reverse("circuits-list"), {"spec": spec, "optimal": True}, format="json")
    assert res.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert res.json()["error"] == "NoSolutionError"


# ----------------------------
# Sweeps
# ----------------------------

def test_sweep_rows_in_grid_order(api_client):
    res = api_client.post(reverse("sweeps-list"), {"sweep": fixture_json("sweep_ratio")}, format="json")
    assert res.status_code == status.HTTP_200_OK
    body = res.json()
    assert body["failed"] == 0
    assert [row["index"] for row in body["rows"]] == list(range(10))
    last = body["rows"][-1]
    assert last["C_num"] == pytest.approx(analytic.C_LIMIT, abs=1e-6)


def test_sweep_with_every_point_failing_is_422(api_client, static_model):
    sweep = {"base": {"model": static_model}, "knob": "ratio", "grid": [3.0, 4.0]}
    res = api_client.post(reverse("sweeps-list"), {"sweep": sweep, "parallel": False}, format="json")
    assert res.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert res.json()["error"] == "SweepError"


def test_sweep_bad_spec(api_client, static_model):
    sweep = {"base": {"model": static_model}, "knob": "mu1", "grid": []}
    res = api_client.post(reverse("sweeps-list"), {"sweep": sweep}, format="json")
    assert res.status_code == status.HTTP_400_BAD_REQUEST


# ----------------------------
# Optimize
# ----------------------------

def test_optimize_mu1(api_client, static_model):
    res = api_client.post(reverse("optimize-list"), {"base": {"model": static_model}}, format="json")
    assert res.status_code == status.HTTP_200_OK
    body = res.json()
    assert body["knob"] == "mu1"
    assert body["value"] == pytest.approx(body["closed_form_value"], rel=1e-3)
    assert body["C"] == pytest.approx(analytic.C_LIMIT, abs=1e-8)


def test_optimize_needs_both_bounds(api_client, static_model):
    res = api_client.post(
        reverse("optimize-list"), {"base": {"model": static_model}, "lower": 1.0}, format="json"
    )
    assert res.status_code == status.HTTP_400_BAD_REQUEST


def test_optimize_multimodal_profile_returns_scan(api_client, static_model, mocker):
    mocker.patch.object(
        OptimizationService, "concurrence_at", side_effect=lambda base, knob, x: math.cos(x) ** 2
    )
    res = api_client.post(
        reverse("optimize-list"),
        {"base": {"model": static_model}, "lower": 0.0, "upper": 10.0, "scan_points": 21},
        format="json",
    )
    assert res.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    body = res.json()
    assert body["error"] == "RefinementNeededError"
    assert len(body["scan"]["xs"]) == 21


# ----------------------------
# Runs
# ----------------------------

def test_recorded_run_is_listed(api_client, static_model):
    res = api_client.post(
        reverse("stationary-list"), {"model": static_model, "record": True}, format="json"
    )
    assert res.status_code == status.HTTP_200_OK
    run = res.json()["run"]
    assert SimulationRun.objects.count() == 1

    listing = api_client.get(reverse("runs-list"))
    assert listing.status_code == status.HTTP_200_OK
    assert [r["manifest_hash"] for r in listing.json()] == [run["manifest_hash"]]

    detail = api_client.get(reverse("runs-detail", args=[run["id"]]))
    assert detail.status_code == status.HTTP_200_OK
    assert detail.json()["command"] == "stationary"
    assert detail.json()["methods"] == ["linear-solve"]


def test_runs_are_read_only(api_client):
    res = api_client.post(reverse("runs-list"), {"command": "x"}, format="json")
    assert res.status_code == status.HTTP_405_METHOD_NOT_ALLOWED
