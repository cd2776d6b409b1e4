"""
Tests for the CSV/JSON writers and SVG plots.
"""

import json

import numpy as np
import pandas as pd
import pytest

from pairsim.dynamics import evolve
from pairsim.model import DrivenPhase, ModelSpec
from pairsim.quantum_core import ground_state
from pairsim.utils.export import (
    element_columns,
    plot_sweep,
    plot_trajectory,
    sweep_frame,
    trajectory_frame,
    write_csv,
    write_table,
)


# ---------- FIXTURES ----------

@pytest.fixture
def model():
    return ModelSpec(mu1=0.3, omega_a1=5.0, omega_a2=5.0, gamma1=1.0, phase1=DrivenPhase(10.0))


@pytest.fixture
def frame(model):
    """Short driven trajectory as a table."""
    return trajectory_frame(model, evolve(model, ground_state(), 0.5, n_points=6))


@pytest.fixture
def rows():
    return [
        {"index": 1, "mu1": 2.0, "C_num": 0.2, "method": "linear-solve", "error": None},
        {"index": 0, "mu1": 1.0, "C_num": 0.1, "method": "linear-solve", "error": None},
    ]


# ---------- TABLES ----------

def test_element_columns():
    columns = element_columns()
    assert len(columns) == 32
    assert columns[:2] == ["re_00_00", "im_00_00"]
    assert "re_00_11" in columns and "im_11_00" in columns


def test_trajectory_frame_layout(frame):
    assert list(frame.columns) == ["t", *element_columns(), "C", "F"]
    assert len(frame) == 6
    assert frame["re_00_00"].iloc[0] == 1.0
    assert frame["C"].iloc[0] == 0.0
    assert frame["F"].iloc[0] == pytest.approx(0.5)


def test_csv_round_trip_is_exact(frame, tmp_path):
    path = write_csv(frame, tmp_path / "out" / "trajectory.csv")
    back = pd.read_csv(path, float_precision="round_trip")
    np.testing.assert_array_equal(back["t"].to_numpy(), frame["t"].to_numpy())
    np.testing.assert_array_equal(back["re_00_11"].to_numpy(), frame["re_00_11"].to_numpy())


def test_sweep_frame_column_order(rows):
    frame = sweep_frame(rows, "mu1")
    assert list(frame.columns) == ["index", "mu1", "C_num", "method", "error"]


def test_json_table(rows, tmp_path):
    path = write_table(sweep_frame(rows, "mu1"), tmp_path / "sweep.json", "json")
    data = json.loads(path.read_text())
    assert data[0]["mu1"] == 2.0
    assert data[0]["error"] is None


def test_unknown_table_format(rows, tmp_path):
    with pytest.raises(ValueError):
        write_table(sweep_frame(rows, "mu1"), tmp_path / "sweep.xml", "xml")


# ---------- PLOTS ----------

def test_plots_are_svg(frame, rows, tmp_path):
    trajectory = plot_trajectory(frame, tmp_path / "trajectory.svg", title="driven")
    sweep = plot_sweep(sweep_frame(rows, "mu1"), "mu1", tmp_path / "sweep.svg")
    for path in (trajectory, sweep):
        assert path.exists()
        assert "<svg" in path.read_text()
