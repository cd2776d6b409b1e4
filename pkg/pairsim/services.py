"""
Workflow services for pairsim.

    SweepService          one stationary solve per grid value of a knob
    OptimizationService   golden-section search of the stationary concurrence
    ManifestService       hashes and run manifests
    ValidationService     built-in invariant suite behind `manage.py validate`

Knob names: any numeric ModelSpec field, plus
    theta1   static phase of the mu1 term
    phi0     phase offset of a driven mu1 term
    Omega    w_a1 + w_a2 (split evenly; a drive follows it)
    ratio    G1 / G2 at fixed G1 (sets gamma_phi)
For circuit specs any numeric field, plus the shared aliases Phi_x
(charge_direct) and Phi_c (flux_direct).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from celery import group
from django.utils import timezone

from pairsim import analytic, blochvec, circuits
from pairsim.conf import pairsim_settings
from pairsim.dynamics import evolve, stationary_numeric
from pairsim.exceptions import (
    InvalidSpecError,
    NoSolutionError,
    PairSimError,
    RefinementNeededError,
    SweepError,
)
from pairsim.measures import (
    XStateEntries,
    concurrence,
    concurrence_x,
    fidelity_with,
    werner_state,
)
from pairsim.model import DrivenPhase, ModelSpec, StaticPhase, lindblad_rhs
from pairsim.quantum_core import (
    basis_state,
    dm_from_pure,
    random_density_matrix,
)
from pairsim.utils.search import golden_section_max, is_unimodal, prescan

logger = logging.getLogger(__name__)

Base = Union[ModelSpec, circuits.CircuitSpec]

OUTPUTS = ("C_num", "F_num", "C_strong", "F_strong", "C_weak", "F_weak")
SHARED_ALIASES = {
    "charge_direct": {"Phi_x": ("Phi_x1", "Phi_x2")},
    "flux_direct": {"Phi_c": ("Phi_c1", "Phi_c2")},
}
MODEL_FIELDS = ("mu1", "mu2", "theta2", "omega_a1", "omega_a2", "gamma1", "gamma_phi")


# ---------------------------------------------------------------------------
# Knobs
# ---------------------------------------------------------------------------

def _apply_model_knob(spec: ModelSpec, knob: str, value: float) -> ModelSpec:
    if knob in MODEL_FIELDS:
        return spec.with_updates(**{knob: value})
    if knob == "theta1":
        if spec.is_driven:
            raise InvalidSpecError("theta1 is not a knob of a driven model; use phi0")
        return spec.with_updates(phase1=StaticPhase(value))
    if knob == "phi0":
        if not spec.is_driven:
            raise InvalidSpecError("phi0 is a knob of driven models only")
        return spec.with_updates(phase1=DrivenPhase(spec.phase1.omega, value))
    if knob == "Omega":
        phase = DrivenPhase(value, spec.phase1.phi0) if spec.is_driven else spec.phase1
        return spec.with_updates(omega_a1=value / 2, omega_a2=value / 2, phase1=phase)
    if knob == "ratio":
        if not 0 < value <= 2:
            raise InvalidSpecError(f"G1/G2 must lie in (0, 2], got {value:g}")
        return spec.with_updates(gamma_phi=max(spec.gamma1 / value - spec.gamma1 / 2, 0.0))
    raise InvalidSpecError(f"unknown model knob {knob!r}")


def _apply_circuit_knob(spec: circuits.CircuitSpec, knob: str, value: float):
    targets = SHARED_ALIASES.get(spec.kind, {}).get(knob, (knob,))
    names = {f.name for f in fields(spec)}
    unknown = [t for t in targets if t not in names]
    if unknown:
        raise InvalidSpecError(f"unknown {spec.kind} knob {knob!r}")
    return replace(spec, **{t: value for t in targets})


def apply_knob(base: Base, knob: str, value: float) -> Base:
    """Return a copy of `base` with the knob set to `value`."""
    if isinstance(base, ModelSpec):
        return _apply_model_knob(base, knob, float(value))
    return _apply_circuit_knob(base, knob, float(value))


def model_for(base: Base) -> ModelSpec:
    if isinstance(base, ModelSpec):
        return base
    return circuits.to_model(base)


def base_from_dict(data: Dict[str, Any]) -> Base:
    """
    Parse `{"model": {...}}`, `{"circuit": {...}}`, a bare circuit spec (it has
    a `kind`) or a bare model spec.
    """
    if not isinstance(data, dict):
        raise InvalidSpecError("spec must be a JSON object")
    if "model" in data and len(data) == 1:
        return ModelSpec.from_dict(data["model"])
    if "circuit" in data and len(data) == 1:
        return circuits.circuit_from_dict(data["circuit"])
    if "kind" in data:
        return circuits.circuit_from_dict(data)
    return ModelSpec.from_dict(data)


def base_to_dict(base: Base) -> Dict[str, Any]:
    if isinstance(base, ModelSpec):
        return {"model": base.to_dict()}
    return {"circuit": base.to_dict()}


# ---------------------------------------------------------------------------
# Point evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointReport:
    """Numeric and closed-form stationary quantities of one model."""

    model: ModelSpec
    C_num: float
    F_num: float
    method: str
    residual: float
    approximate: bool
    C_strong: Optional[float] = None
    F_strong: Optional[float] = None
    C_weak: Optional[float] = None
    F_weak: Optional[float] = None
    branch_valid: Optional[bool] = None
    rho_inf: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "C_num": self.C_num,
            "F_num": self.F_num,
            "C_strong": self.C_strong,
            "F_strong": self.F_strong,
            "C_weak": self.C_weak,
            "F_weak": self.F_weak,
            "method": self.method,
            "residual": self.residual,
            "approximate": self.approximate,
            "branch_valid": self.branch_valid,
        }


def evaluate_model(model: ModelSpec) -> PointReport:
    """Stationary state of `model` with its closed-form counterpart."""
    result = stationary_numeric(model)
    target = analytic.target_state(model)
    closed = analytic.closed_form(model)
    extra: Dict[str, Any] = {"branch_valid": closed.branch_valid}
    if model.is_driven:
        extra.update(C_weak=closed.C, F_weak=closed.F)
    else:
        extra.update(C_strong=closed.C, F_strong=closed.F)
    return PointReport(
        model=model,
        C_num=concurrence(result.rho_inf),
        F_num=fidelity_with(result.rho_inf, target),
        method=result.method,
        residual=result.residual,
        approximate=result.approximate,
        rho_inf=result.rho_inf,
        **extra,
    )


class StationaryService:
    """Stationary-state reports for the `stationary` command and endpoint."""

    @staticmethod
    def solve(model: ModelSpec, method: str = "auto") -> Dict[str, Any]:
        """
        Numeric stationary state of `model` with its closed-form counterpart.

        Returns:
            dict: model, rho_inf, method, residual, approximate, frame, C, F,
            closed_form, optimum and static_mu1_bound, a lower bound on the
            static-phase optimal mu1 at this Omega (all None when no closed
            form applies).
        """
        result = stationary_numeric(model, method=method)
        target = analytic.target_state(model)
        report: Dict[str, Any] = {
            "model": model.to_dict(),
            **result.to_dict(),
            "C": concurrence(result.rho_inf),
            "F": fidelity_with(result.rho_inf, target),
        }
        try:
            report["closed_form"] = analytic.closed_form(model).to_dict()
            report["optimum"] = analytic.closed_form_optimum(model).to_dict()
            report["static_mu1_bound"] = analytic.weak_to_strong_bound(
                model.Omega, model.gamma1, model.gamma_phi
            )
        except PairSimError as exc:
            logger.warning("closed form unavailable: %s", exc)
            report["closed_form"] = None
            report["optimum"] = None
            report["static_mu1_bound"] = None
        return report


class CircuitService:
    """Circuit-to-model reports for the `circuit` command and endpoint."""

    @staticmethod
    def evaluate(spec: circuits.CircuitSpec, optimal: bool = False) -> Dict[str, Any]:
        """
        Map a circuit onto the model and solve for its stationary state.

        Args:
            spec (CircuitSpec): Circuit parameters.
            optimal (bool): Tune the circuit's design knob first.

        Returns:
            dict: kind, spec, model, C_num, F_num, method, the knob setting
            (when `optimal`) and the cavity condition table (cqed only).
        """
        report: Dict[str, Any] = {"kind": spec.kind}
        if optimal:
            setting = circuits.optimal_knob(spec)
            model = setting.model
            report["setting"] = setting.to_dict()
            spec = setting.spec
        else:
            model = circuits.to_model(spec)
        point = evaluate_model(model)
        report.update(
            spec=spec.to_dict(),
            model=model.to_dict(),
            C_num=point.C_num,
            F_num=point.F_num,
            method=point.method,
            approximate=point.approximate,
        )
        if isinstance(spec, circuits.CQEDSpec):
            report["conditions"] = [c.to_dict() for c in circuits.cqed_condition_report(spec)]
        return report


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _grid_from(data: Any) -> List[float]:
    if isinstance(data, dict):
        try:
            start, stop, num = float(data["start"]), float(data["stop"]), int(data["num"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpecError(f"grid needs start, stop, num: {exc}") from exc
        if num < 1:
            raise InvalidSpecError("grid num must be >= 1")
        if data.get("log"):
            if start <= 0 or stop <= 0:
                raise InvalidSpecError("log grid needs positive bounds")
            return [float(x) for x in np.geomspace(start, stop, num)]
        return [float(x) for x in np.linspace(start, stop, num)]
    if isinstance(data, (list, tuple)):
        try:
            return [float(x) for x in data]
        except (TypeError, ValueError) as exc:
            raise InvalidSpecError(f"grid values must be numbers: {exc}") from exc
    raise InvalidSpecError("grid must be a list or {start, stop, num}")


@dataclass(frozen=True)
class SweepSpec:
    """
    One-dimensional sweep.

    Attributes:
        base (ModelSpec | CircuitSpec): Spec the knob is applied to.
        knob (str): Knob name (see module docstring).
        grid (tuple[float, ...]): Knob values, nonempty and finite.
        outputs (tuple[str, ...]): Requested columns; empty means all.
        optimal_mu1 (bool): Replace mu1 by the closed-form optimum at each
            point (model bases only).
    """

    base: Base
    knob: str
    grid: Tuple[float, ...]
    outputs: Tuple[str, ...] = OUTPUTS
    optimal_mu1: bool = False

    def __post_init__(self):
        grid = tuple(float(x) for x in self.grid)
        if not grid:
            raise InvalidSpecError("sweep grid is empty")
        if not all(math.isfinite(x) for x in grid):
            raise InvalidSpecError("sweep grid values must be finite")
        object.__setattr__(self, "grid", grid)
        outputs = tuple(self.outputs) or OUTPUTS
        unknown = [o for o in outputs if o not in OUTPUTS]
        if unknown:
            raise InvalidSpecError(f"unknown outputs: {', '.join(unknown)}")
        object.__setattr__(self, "outputs", outputs)
        if not isinstance(self.knob, str) or not self.knob:
            raise InvalidSpecError("sweep knob must be a non-empty string")
        if self.optimal_mu1 and not isinstance(self.base, ModelSpec):
            raise InvalidSpecError("optimal_mu1 needs a model base")

    def point(self, value: float) -> ModelSpec:
        model = model_for(apply_knob(self.base, self.knob, value))
        if self.optimal_mu1:
            model = model.with_updates(mu1=analytic.closed_form_optimum(model).mu1_opt)
        return model

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": base_to_dict(self.base),
            "knob": self.knob,
            "grid": list(self.grid),
            "outputs": list(self.outputs),
            "optimal_mu1": self.optimal_mu1,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepSpec":
        if not isinstance(data, dict):
            raise InvalidSpecError("sweep spec must be a JSON object")
        missing = [k for k in ("base", "knob", "grid") if k not in data]
        if missing:
            raise InvalidSpecError(f"missing sweep fields: {', '.join(missing)}")
        unknown = sorted(set(data) - {"base", "knob", "grid", "outputs", "optimal_mu1"})
        if unknown:
            raise InvalidSpecError(f"unknown sweep fields: {', '.join(unknown)}")
        return cls(
            base=base_from_dict(data["base"]),
            knob=data["knob"],
            grid=tuple(_grid_from(data["grid"])),
            outputs=tuple(data.get("outputs") or ()),
            optimal_mu1=bool(data.get("optimal_mu1", False)),
        )


def compute_point(sweep: SweepSpec, index: int, value: float) -> Dict[str, Any]:
    """
    One sweep row. Failures are recorded in the `error` column.
    """
    row: Dict[str, Any] = {"index": index, sweep.knob: value}
    row.update({name: None for name in sweep.outputs})
    if sweep.knob != "mu1":
        row["mu1"] = None
    row.update(method=None, approximate=None, branch_valid=None, error=None)
    try:
        model = sweep.point(value)
        report = evaluate_model(model)
    except PairSimError as exc:
        logger.warning("sweep point %s=%g failed: %s", sweep.knob, value, exc)
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    values = report.to_dict()
    for name in sweep.outputs:
        row[name] = values[name]
    if sweep.knob != "mu1":
        row["mu1"] = model.mu1
    row.update(
        method=report.method,
        approximate=report.approximate,
        branch_valid=report.branch_valid,
    )
    return row


@dataclass
class SweepResult:
    sweep: SweepSpec
    rows: List[Dict[str, Any]]

    @property
    def methods(self) -> List[Optional[str]]:
        return [row.get("method") for row in self.rows]

    @property
    def failed(self) -> int:
        return sum(1 for row in self.rows if row.get("error"))


class SweepService:
    """
    Runs sweeps point by point.

    Notes:
        - With `parallel=True` the points are dispatched as Celery groups of
          `compute_sweep_point` tasks, at most SWEEP_MAX_WORKERS points per
          group; under CELERY_TASK_ALWAYS_EAGER they run in-process. Rows are
          returned in grid order either way.
        - A failed point does not abort the sweep; `SweepError` is raised only
          when every point fails.
    """

    @staticmethod
    def run(sweep: SweepSpec, parallel: bool = True) -> SweepResult:
        if parallel and len(sweep.grid) > 1:
            from pairsim.tasks import compute_sweep_point

            payload = sweep.to_dict()
            batch = max(int(pairsim_settings.SWEEP_MAX_WORKERS), 1)
            points = list(enumerate(sweep.grid))
            rows = []
            for start in range(0, len(points), batch):
                job = group(
                    compute_sweep_point.s(payload, i, value)
                    for i, value in points[start : start + batch]
                )
                rows.extend(job.apply_async().join())
        else:
            rows = [compute_point(sweep, i, value) for i, value in enumerate(sweep.grid)]
        rows.sort(key=lambda row: row["index"])
        result = SweepResult(sweep=sweep, rows=rows)
        if result.failed == len(rows):
            raise SweepError(f"all {len(rows)} sweep points failed", rows)
        if result.failed:
            logger.warning("%d of %d sweep points failed", result.failed, len(rows))
        return result


# ---------------------------------------------------------------------------
# Optimization
# ---------------------------------------------------------------------------

@dataclass
class OptimizationResult:
    """
    Outcome of a knob optimization.

    Attributes:
        knob (str): Optimized knob.
        value (float): Numeric optimum.
        C (float), F (float): Stationary concurrence and fidelity there.
        bounds (tuple[float, float]): Search interval.
        at_boundary (bool): The optimum sits on a bound of the interval.
        closed_form_value (float, optional): Closed-form optimal knob value.
        closed_form (OptimalPoint, optional): Closed-form optimum.
        scan (dict): Pre-scan samples.
    """

    knob: str
    value: float
    C: float
    F: float
    bounds: Tuple[float, float]
    at_boundary: bool
    closed_form_value: Optional[float] = None
    closed_form: Optional[analytic.OptimalPoint] = None
    scan: Dict[str, List[float]] = field(default_factory=dict)

    @property
    def gap(self) -> Optional[float]:
        if self.closed_form_value is None:
            return None
        return self.value - self.closed_form_value

    @property
    def relative_gap(self) -> Optional[float]:
        if not self.closed_form_value:
            return None
        return self.gap / self.closed_form_value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "knob": self.knob,
            "value": self.value,
            "C": self.C,
            "F": self.F,
            "bounds": list(self.bounds),
            "at_boundary": self.at_boundary,
            "closed_form_value": self.closed_form_value,
            "closed_form": self.closed_form.to_dict() if self.closed_form else None,
            "gap": self.gap,
            "relative_gap": self.relative_gap,
        }


class OptimizationService:
    """Maximizes the numeric stationary concurrence over one knob."""

    SCAN_POINTS = 41
    TOL_FACTOR = 1e-6

    @staticmethod
    def concurrence_at(base: Base, knob: str, value: float) -> float:
        return concurrence(stationary_numeric(model_for(apply_knob(base, knob, value))).rho_inf)

    @staticmethod
    def closed_form_knob(base: Base, knob: str) -> Tuple[Optional[float], Optional[analytic.OptimalPoint]]:
        """Closed-form optimal value of the knob, when one is known."""
        try:
            if isinstance(base, ModelSpec):
                if knob != "mu1":
                    return None, None
                point = analytic.closed_form_optimum(base)
                return point.mu1_opt, point
            setting = circuits.optimal_knob(base)
        except (NoSolutionError, InvalidSpecError) as exc:
            logger.info("no closed-form optimum for %s: %s", knob, exc)
            return None, None
        if setting.knob != knob:
            return None, setting.predicted
        value = setting.value[0] if isinstance(setting.value, tuple) else setting.value
        return value, setting.predicted

    @classmethod
    def optimize_knob(
        cls,
        base: Base,
        knob: str,
        bounds: Optional[Sequence[float]] = None,
        scan_points: Optional[int] = None,
    ) -> OptimizationResult:
        """
        Golden-section search of C_num over `bounds`.

        Args:
            base: Model or circuit spec.
            knob (str): Knob to tune.
            bounds (tuple[float, float], optional): Search interval; for the
                mu1 knob of a model it defaults to a bracket around the
                closed-form optimum.
            scan_points (int, optional): Pre-scan resolution.

        Returns:
            OptimizationResult

        Raises:
            RefinementNeededError: If the pre-scan is not unimodal.
            InvalidSpecError: On missing or degenerate bounds.
        """
        if bounds is None:
            if isinstance(base, ModelSpec) and knob == "mu1":
                bounds = analytic.default_mu1_bounds(base)
            else:
                raise InvalidSpecError(f"bounds are required for knob {knob!r}")
        lower, upper = (float(b) for b in bounds)
        if not (math.isfinite(lower) and math.isfinite(upper)) or upper <= lower:
            raise InvalidSpecError(f"invalid bounds ({lower:g}, {upper:g})")

        def objective(x: float) -> float:
            return cls.concurrence_at(base, knob, x)

        scan = prescan(objective, lower, upper, scan_points or cls.SCAN_POINTS)
        if not is_unimodal(scan.ys):
            raise RefinementNeededError(
                f"concurrence versus {knob} is not unimodal on [{lower:g}, {upper:g}]",
                scan.to_dict(),
            )
        tol = cls.TOL_FACTOR * (upper - lower)
        lo, hi = scan.bracket()
        value, c_value = golden_section_max(objective, lo, hi, tol=tol)
        at_boundary = scan.at_boundary and (value - lower <= tol or upper - value <= tol)
        if at_boundary:
            logger.warning("optimum of %s lies on the search boundary at %g", knob, value)

        model = model_for(apply_knob(base, knob, value))
        rho = stationary_numeric(model).rho_inf
        cf_value, cf_point = cls.closed_form_knob(base, knob)
        return OptimizationResult(
            knob=knob,
            value=value,
            C=c_value,
            F=fidelity_with(rho, analytic.target_state(model)),
            bounds=(lower, upper),
            at_boundary=at_boundary,
            closed_form_value=cf_value,
            closed_form=cf_point,
            scan=scan.to_dict(),
        )


# ---------------------------------------------------------------------------
# Manifests
# ---------------------------------------------------------------------------

MANIFEST_TOLERANCES = (
    "RTOL",
    "ATOL",
    "MIN_STEP",
    "PHYSICAL_TOL",
    "POSITIVITY_SLACK",
    "COND_THRESHOLD",
    "RESIDUAL_BOUND",
    "LONG_TIME_FACTOR",
)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=True)


def sha256_of(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    """
    Reproducibility record of a run.

    `manifest_hash` covers everything except the timestamp, so identical
    inputs under the same version and settings give identical hashes.
    """

    command: str
    input_hash: str
    tool_version: str
    timestamp: str
    tolerances: Dict[str, Any]
    methods: List[Optional[str]]
    outputs: List[str]
    manifest_hash: str = ""

    def hashed_content(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "input_hash": self.input_hash,
            "tool_version": self.tool_version,
            "tolerances": self.tolerances,
            "methods": self.methods,
            "outputs": self.outputs,
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.hashed_content()
        data.update(timestamp=self.timestamp, manifest_hash=self.manifest_hash)
        return data


class ManifestService:
    """Builds, writes and records run manifests."""

    FILENAME = "manifest.json"

    @staticmethod
    def input_hash(inputs: Dict[str, Any]) -> str:
        return sha256_of(inputs)

    @classmethod
    def build(
        cls,
        command: str,
        inputs: Dict[str, Any],
        methods: Sequence[Optional[str]] = (),
        outputs: Sequence[str] = (),
    ) -> RunManifest:
        settings = pairsim_settings.as_dict()
        manifest = RunManifest(
            command=command,
            input_hash=cls.input_hash(inputs),
            tool_version=str(settings["TOOL_VERSION"]),
            timestamp=timezone.now().isoformat(),
            tolerances={name: settings[name] for name in MANIFEST_TOLERANCES},
            methods=list(methods),
            outputs=list(outputs),
        )
        manifest.manifest_hash = sha256_of(manifest.hashed_content())
        return manifest

    @classmethod
    def write(cls, manifest: RunManifest, out_dir: Union[str, Path]) -> Path:
        path = Path(out_dir) / cls.FILENAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
        logger.info("wrote manifest %s (%s)", path, manifest.manifest_hash[:12])
        return path

    @staticmethod
    def record(
        manifest: RunManifest,
        inputs: Dict[str, Any],
        summary: Optional[Dict[str, Any]] = None,
        out_dir: Union[str, Path, None] = None,
    ):
        """Store the manifest as a SimulationRun row."""
        from pairsim.models import SimulationRun

        return SimulationRun.objects.create(
            command=manifest.command,
            input_hash=manifest.input_hash,
            manifest_hash=manifest.manifest_hash,
            tool_version=manifest.tool_version,
            tolerances=manifest.tolerances,
            methods=manifest.methods,
            inputs=inputs,
            summary=summary or {},
            output_dir=str(out_dir or ""),
        )


# ---------------------------------------------------------------------------
# Built-in validation suite
# ---------------------------------------------------------------------------

C_PEAK = analytic.C_LIMIT
F_PEAK = analytic.F_LIMIT


def reference_circuits() -> Dict[str, circuits.CircuitSpec]:
    """One spec per circuit kind at representative experimental magnitudes."""
    return {
        "charge_direct": circuits.ChargeDirectSpec(
            E_J0=10e9, J=4e9, Phi_x1=0.25, Phi_x2=0.25, gamma1=50e6
        ),
        "flux_direct": circuits.FluxDirectSpec(
            I_p1=0.5e-6,
            I_p2=0.5e-6,
            L_1=10e-12,
            L_2=10e-12,
            I_0=20e-6,
            Phi_c1=0.19,
            Phi_c2=0.19,
            M_mut=2.65e-12,
            gamma1=5e6,
        ),
        "charge_lc": circuits.ChargeLCSpec(E_J0=10e9, E_L=20e9, Phi_x=0.25, gamma1=50e6),
        "flux_coupler": circuits.FluxCouplerSpec(
            Delta_1=1e9, Delta_2=1e9, J0=1e9, Phi_3=0.1, gamma1=5e6
        ),
        "cqed": circuits.CQEDSpec(
            E_J=5e9,
            omega_c_bare=4.796e9,
            g=20e6,
            lambda_g=10e6,
            lambda_e=10e6,
            lambda_d=100e6,
            delta=100e6,
            Omega_tilde=10e9,
            gamma1=0.1e6,
        ),
    }


def peak_model(Omega: float = 100.0, gamma1: float = 1.0) -> ModelSpec:
    """Static-phase model at the closed-form optimal coupling."""
    base = ModelSpec(mu1=0.0, omega_a1=Omega / 2, omega_a2=Omega / 2, gamma1=gamma1)
    return base.with_updates(mu1=analytic.strong_optimal(Omega, gamma1, 0.0).mu1_opt)


def random_model(rng: np.random.Generator) -> ModelSpec:
    Omega = rng.uniform(10, 200)
    split = rng.uniform(0.3, 0.7)
    return ModelSpec(
        mu1=rng.uniform(0, Omega / 4),
        mu2=rng.uniform(0, Omega / 4),
        phase1=StaticPhase(rng.uniform(-math.pi, math.pi)),
        theta2=rng.uniform(-math.pi, math.pi),
        omega_a1=Omega * split,
        omega_a2=Omega * (1 - split),
        gamma1=rng.uniform(0.2, 2.0),
        gamma_phi=rng.uniform(0, 1.0),
    )


def random_x_state(rng: np.random.Generator) -> XStateEntries:
    a, b, c, d = rng.dirichlet(np.ones(4))
    w = math.sqrt(a * d) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * math.pi))
    z = math.sqrt(b * c) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * math.pi))
    return XStateEntries(a=a, b=b, c=c, d=d, w=complex(w), z=complex(z))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


class ValidationService:
    """
    Invariant checks of the whole stack.

    Each check returns (passed, detail); an exception inside a check marks it
    failed with the exception text.
    """

    SEED = 20240917

    def __init__(self, seed: Optional[int] = None):
        self.rng = np.random.default_rng(self.SEED if seed is None else seed)

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
        return [
            ("basis orthonormal", self.check_basis),
            ("encode/decode round trip", self.check_round_trip),
            ("generator matches Liouvillian", self.check_generator),
            ("closed form vs linear solve", self.check_closed_form),
            ("peak concurrence and fidelity", self.check_peak),
            ("C_max curve", self.check_cmax_curve),
            ("mu2 independence", self.check_mu2_independence),
            ("driven phase stationary state", self.check_weak_regime),
            ("X-state concurrence", self.check_x_states),
            ("Werner concurrence", self.check_werner),
            ("circuit optimal knobs", self.check_circuits),
            ("uncontrolled decay", self.check_decay),
        ]

    def run(self) -> List[CheckResult]:
        results = []
        for name, check in self.checks():
            try:
                passed, detail = check()
            except PairSimError as exc:
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(name, bool(passed), detail))
            logger.debug("check %s: %s (%s)", name, "pass" if passed else "FAIL", detail)
        return results

    def check_basis(self):
        err = float(np.max(np.abs(blochvec.basis().gram() - np.eye(16))))
        return err <= 1e-14, f"max |G - I| = {err:.2e}"

    def check_round_trip(self):
        err = 0.0
        for _ in range(20):
            rho = random_density_matrix(self.rng)
            back = blochvec.decode(blochvec.encode(rho))
            err = max(err, float(np.max(np.abs(back.mat - rho.mat))))
        return err <= 1e-14, f"max error {err:.2e}"

    def check_generator(self):
        worst = 0.0
        for _ in range(200):
            spec = random_model(self.rng)
            rho = random_density_matrix(self.rng)
            gen = blochvec.generator(spec)
            lhs = blochvec.encode(lindblad_rhs(spec, rho)).m
            rhs = gen.rhs(blochvec.encode(rho))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / max(1.0, np.abs(gen.A).max()))
        return worst <= 1e-12, f"max relative deviation {worst:.2e}"

    def check_closed_form(self):
        worst = 0.0
        Omega = 100.0
        for fraction in (0.01, 0.05, 0.1, 0.25):
            for ratio in (0.25, 1.0, 2.0):
                spec = _apply_model_knob(
                    ModelSpec(mu1=fraction * Omega, omega_a1=Omega / 2, omega_a2=Omega / 2, gamma1=1.0),
                    "ratio",
                    ratio,
                )
                report = evaluate_model(spec)
                worst = max(worst, abs(report.C_num - report.C_strong), abs(report.F_num - report.F_strong))
        return worst <= 1e-6, f"max |dC|, |dF| = {worst:.2e}"

    def check_peak(self):
        report = evaluate_model(peak_model())
        ok = abs(report.C_num - C_PEAK) <= 1e-4 and abs(report.F_num - F_PEAK) <= 1e-4
        return ok, f"C = {report.C_num:.6f}, F = {report.F_num:.6f}"

    def check_cmax_curve(self):
        rows = analytic.cmax_curve(np.linspace(0.01, 2.0, 200))
        c_values = [r[1] for r in rows]
        monotone = all(b >= a for a, b in zip(c_values, c_values[1:]))
        end = rows[-1]
        ok = monotone and abs(end[1] - C_PEAK) <= 1e-9 and abs(end[2] - F_PEAK) <= 1e-9
        return ok, f"monotone={monotone}, endpoint=({end[1]:.9f}, {end[2]:.9f})"

    def check_mu2_independence(self):
        spread = 0.0
        static = peak_model()
        driven = ModelSpec(
            mu1=1.0 / (math.sqrt(5) + 1),
            omega_a1=100.0,
            omega_a2=100.0,
            gamma1=1.0,
            phase1=DrivenPhase(200.0, 0.0),
        )
        for base in (static, driven):
            values = [evaluate_model(base.with_updates(mu2=m)) for m in (0.0, 0.1, 1.0, 10.0)]
            for attr in ("C_num", "F_num"):
                column = [getattr(v, attr) for v in values]
                spread = max(spread, max(column) - min(column))
        return spread <= 1e-8, f"max spread {spread:.2e}"

    def check_weak_regime(self):
        mu1 = 1.0 / (math.sqrt(5) + 1)
        spec = ModelSpec(
            mu1=mu1, omega_a1=100.0, omega_a2=100.0, gamma1=1.0, phase1=DrivenPhase(200.0, 0.0)
        )
        report = evaluate_model(spec)
        err = abs(report.C_num - report.C_weak)
        return err <= 1e-6, f"|C_num - C_weak| = {err:.2e}"

    def check_x_states(self):
        worst = 0.0
        for _ in range(200):
            x = random_x_state(self.rng)
            worst = max(worst, abs(concurrence_x(x) - concurrence(x.to_matrix())))
        return worst <= 1e-10, f"max deviation {worst:.2e}"

    def check_werner(self):
        worst = 0.0
        for p in np.linspace(0, 1, 21):
            worst = max(worst, abs(concurrence(werner_state(p)) - max(0.0, (3 * p - 1) / 2)))
        return worst <= 1e-10, f"max deviation {worst:.2e}"

    def check_circuits(self):
        details = []
        ok = True
        for kind, spec in reference_circuits().items():
            setting = circuits.optimal_knob(spec)
            c_num = evaluate_model(setting.model).C_num
            rel = abs(c_num - C_PEAK) / C_PEAK
            ok = ok and rel <= 0.02
            details.append(f"{kind}: C={c_num:.4f}")
        return ok, ", ".join(details)

    def check_decay(self):
        spec = ModelSpec(mu1=0.0, omega_a1=50.0, omega_a2=50.0, gamma1=1.0)
        ground = dm_from_pure(basis_state("00"))
        worst = 1.0
        for _ in range(5):
            final = evolve(spec, random_density_matrix(self.rng), 10.0, n_points=2).final
            worst = min(worst, fidelity_with(final, ground))
        return worst > 1 - 1e-6, f"min fidelity with |00> = {worst:.9f}"
