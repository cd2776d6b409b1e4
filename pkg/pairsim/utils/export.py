"""
Result files: CSV and JSON tables and SVG plots.

Floats are written with CSV_FLOAT_FORMAT ("%.17g" by default), which reads
back bit-identically. Plots use the non-interactive Agg backend so they can be
produced on headless machines and inside Celery workers.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from pairsim import analytic  # noqa: E402
from pairsim.conf import pairsim_settings  # noqa: E402
from pairsim.dynamics import Trajectory  # noqa: E402
from pairsim.model import ModelSpec  # noqa: E402
from pairsim.quantum_core import BASIS_LABELS  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SWEEP_LEAD_COLUMNS = ("index",)
SWEEP_TAIL_COLUMNS = ("method", "approximate", "branch_valid", "error")


def element_columns() -> List[str]:
    """re_/im_ column names of the sixteen density-matrix entries, row major."""
    names = []
    for row in BASIS_LABELS:
        for col in BASIS_LABELS:
            names.extend([f"re_{row}_{col}", f"im_{row}_{col}"])
    return names


def trajectory_frame(spec: ModelSpec, trajectory: Trajectory) -> pd.DataFrame:
    """
    One row per output time: t, every matrix entry, C and F.

    F is the overlap with the model's target state; for a driven model the
    target rotates with the drive, so the lab-frame target at each t is used.
    """
    target = (lambda t: analytic.lab_frame_target(spec, t)) if spec.is_driven else analytic.target_state(spec)
    columns = element_columns()
    records = []
    for t, state in zip(trajectory.times, trajectory.states):
        flat = state.mat.reshape(-1)
        values = np.empty(2 * flat.size)
        values[0::2] = flat.real
        values[1::2] = flat.imag
        records.append([float(t), *values])
    frame = pd.DataFrame.from_records(records, columns=["t", *columns])
    frame["C"] = trajectory.concurrences()
    frame["F"] = trajectory.fidelities(target)
    return frame


def sweep_frame(rows: Iterable[Dict[str, Any]], knob: str) -> pd.DataFrame:
    """Sweep rows as a table with index and knob first, diagnostics last."""
    frame = pd.DataFrame(list(rows))
    lead = [c for c in (*SWEEP_LEAD_COLUMNS, knob) if c in frame.columns]
    tail = [c for c in SWEEP_TAIL_COLUMNS if c in frame.columns]
    middle = [c for c in frame.columns if c not in lead and c not in tail]
    return frame[lead + middle + tail]


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=pairsim_settings.CSV_FLOAT_FORMAT)
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, default=_json_default)


def write_json(data: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(data), encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def write_table(frame: pd.DataFrame, path: PathLike, fmt: str = "csv") -> Path:
    """Write a table as CSV or as a JSON list of records."""
    if fmt == "csv":
        return write_csv(frame, path)
    if fmt == "json":
        records = frame.replace({np.nan: None}).to_dict(orient="records")
        return write_json(records, path)
    raise ValueError(f"unknown table format {fmt!r}")


# ---------------------------------------------------------------------------
# Plots
# ---------------------------------------------------------------------------

def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    logger.info("wrote %s", path)
    return path


def plot_trajectory(frame: pd.DataFrame, path: PathLike, title: Optional[str] = None) -> Path:
    """C(t) and F(t) of a trajectory table."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(frame["t"], frame["C"], label="concurrence")
    ax.plot(frame["t"], frame["F"], label="fidelity")
    ax.axhline(analytic.C_LIMIT, color="grey", linestyle=":", linewidth=0.8)
    ax.set_xlabel("t")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_sweep(frame: pd.DataFrame, knob: str, path: PathLike, title: Optional[str] = None) -> Path:
    """Numeric concurrence against the knob, with the closed form when present."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if "C_num" in frame:
        ax.plot(frame[knob], frame["C_num"], "o", markersize=3, label="C numeric")
    for column, label in (("C_strong", "C closed form"), ("C_weak", "C closed form (driven)")):
        if column in frame and frame[column].notna().any():
            ax.plot(frame[knob], frame[column], "-", label=label)
    ax.set_xlabel(knob)
    ax.set_ylabel("C")
    ax.legend()
    if title:
        ax.set_title(title)
    return _save(fig, path)
