"""
Tests for the Celery sweep task.

Tasks run eagerly (CELERY_TASK_ALWAYS_EAGER), so `.delay()` executes
in-process and returns an EagerResult.
"""

import pytest
from celery import group

from pairsim import analytic
from pairsim.model import ModelSpec
from pairsim.services import SweepService, SweepSpec
from pairsim.tasks import compute_sweep_point


# ---------- FIXTURES ----------

@pytest.fixture
def payload():
    """JSON form of a two-point mu1 sweep, as sent to the broker."""
    base = ModelSpec(mu1=1.0, omega_a1=50.0, omega_a2=50.0, gamma1=1.0)
    return SweepSpec(base=base, knob="mu1", grid=(1.0, 7.7314)).to_dict()


# ---------- TASK TESTS ----------

def test_task_computes_one_row(payload):
    row = compute_sweep_point.delay(payload, 1, 7.7314).get()
    assert row["index"] == 1
    assert row["mu1"] == 7.7314
    assert row["C_num"] == pytest.approx(analytic.C_LIMIT, abs=1e-6)
    assert row["error"] is None


def test_task_reports_point_failures(payload):
    payload = {**payload, "knob": "ratio"}
    row = compute_sweep_point.delay(payload, 0, 5.0).get()
    assert row["C_num"] is None
    assert "ratio" in row
    assert row["error"].startswith("InvalidSpecError")


def test_parallel_sweep_dispatches_a_group(payload, mocker):
    spy = mocker.patch("pairsim.services.group", wraps=group)
    result = SweepService.run(SweepSpec.from_dict(payload), parallel=True)
    assert spy.call_count == 1
    assert [row["index"] for row in result.rows] == [0, 1]


def test_serial_sweep_skips_celery(payload, mocker):
    spy = mocker.patch("pairsim.services.group", wraps=group)
    SweepService.run(SweepSpec.from_dict(payload), parallel=False)
    assert spy.call_count == 0


def test_parallel_sweep_is_batched_by_max_workers(payload, mocker, settings):
    """SWEEP_MAX_WORKERS caps how many points one group dispatches."""
    settings.PAIRSIM = {"SWEEP_MAX_WORKERS": 1}
    spy = mocker.patch("pairsim.services.group", wraps=group)
    result = SweepService.run(SweepSpec.from_dict(payload), parallel=True)
    assert spy.call_count == 2
    assert [row["index"] for row in result.rows] == [0, 1]
    assert result.rows[1]["C_num"] == pytest.approx(analytic.C_LIMIT, abs=1e-6)
