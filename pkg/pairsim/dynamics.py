"""
Time evolution and stationary states of the master equation.

`evolve` integrates vec(rho) with scipy's Dormand-Prince 5(4) pair, stepping
one output interval at a time so every step can be symmetrized. The stationary
solver tries, in order:

    linear-solve   m = -A^{-1} g in coherent-vector coordinates
    null-space     kernel of the 16x16 Liouvillian
    long-time      integrate for LONG_TIME_FACTOR / G1

Driven models are reduced with `model.rotating_frame` first, so the stationary
state of a driven model is reported in the rotating frame.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import RK45
from scipy.linalg import null_space

from pairsim import blochvec
from pairsim.conf import pairsim_settings
from pairsim.exceptions import (
    InvalidSpecError,
    NonPhysicalStateError,
    NoUniqueSteadyStateError,
    StiffnessError,
)
from pairsim.measures import concurrence, fidelity_with
from pairsim.model import (
    FRAME_LAB,
    FRAME_ROTATING,
    FrameReduction,
    ModelSpec,
    liouvillian,
    liouvillian_parts,
    rotating_frame,
)
from pairsim.quantum_core import (
    ArrayLike,
    DensityMatrix,
    check_physical,
    hermitian_part,
    maximally_mixed,
    unvec,
    vec,
)

logger = logging.getLogger(__name__)

METHOD_AUTO = "auto"
METHOD_LINEAR = "linear-solve"
METHOD_NULL_SPACE = "null-space"
METHOD_LONG_TIME = "long-time"
METHODS = (METHOD_AUTO, METHOD_LINEAR, METHOD_NULL_SPACE, METHOD_LONG_TIME)

TRAJECTORY_TOL = 1e-7
RK45_STAGES = 6
DEFAULT_POINTS = 101


@dataclass
class Trajectory:
    """
    States at increasing output times.

    Attributes:
        times (np.ndarray): Output times.
        states (list[DensityMatrix]): State at each output time.
        accepted_steps (int): Steps accepted by the integrator.
        rejected_steps (int): Step attempts rejected by the error control.
        max_trace_drift (float): Largest |tr rho - 1| seen after any step.
    """

    times: np.ndarray
    states: List[DensityMatrix]
    accepted_steps: int = 0
    rejected_steps: int = 0
    max_trace_drift: float = 0.0

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def concurrences(self) -> np.ndarray:
        return np.array([concurrence(s) for s in self.states])

    def fidelities(self, target) -> np.ndarray:
        """
        Overlap with `target` at every output time.

        `target` is a state, or a callable t -> state for moving targets.
        """
        if callable(target):
            return np.array([fidelity_with(s, target(t)) for t, s in zip(self.times, self.states)])
        return np.array([fidelity_with(s, target) for s in self.states])

    def diagnostics(self) -> dict:
        return {
            "accepted_steps": self.accepted_steps,
            "rejected_steps": self.rejected_steps,
            "max_trace_drift": self.max_trace_drift,
        }


def _output_grid(t_end: float, t_eval: Optional[Sequence[float]], n_points: int) -> np.ndarray:
    if t_eval is None:
        if n_points < 2:
            raise InvalidSpecError("n_points must be >= 2")
        return np.linspace(0.0, t_end, n_points)
    grid = np.asarray(t_eval, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidSpecError("t_eval must be a nonempty 1-D sequence")
    if grid[0] < 0 or grid[-1] > t_end or np.any(np.diff(grid) <= 0):
        raise InvalidSpecError("t_eval must increase strictly within [0, t_end]")
    return grid


def _rhs_function(spec: ModelSpec) -> Callable[[float, np.ndarray], np.ndarray]:
    parts = liouvillian_parts(spec)
    if not spec.is_driven:
        L = parts.at(0.0)
        return lambda t, y: L @ y
    return lambda t, y: parts.at(t) @ y


def _symmetrize(y: np.ndarray) -> np.ndarray:
    return vec(hermitian_part(unvec(y)))


def evolve(
    spec: ModelSpec,
    rho0: ArrayLike,
    t_end: float,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    t_eval: Optional[Sequence[float]] = None,
    n_points: int = DEFAULT_POINTS,
) -> Trajectory:
    """
    Integrate the master equation from t = 0 to `t_end`.

    Args:
        spec (ModelSpec): Model in the lab frame (static or driven phase).
        rho0: Initial state.
        t_end (float): Final time (> 0).
        rtol, atol (float, optional): Error tolerances; default to the
            RTOL/ATOL settings.
        t_eval (sequence, optional): Output times. Defaults to `n_points`
            evenly spaced times including 0 and `t_end`.

    Returns:
        Trajectory

    Raises:
        InvalidSpecError: On a non-positive `t_end` or tolerance.
        NonPhysicalStateError: If `rho0` or an integrated state is not physical.
        StiffnessError: If the step size underflows MIN_STEP or the step
            budget MAX_STEPS runs out.
    """
    rtol = pairsim_settings.RTOL if rtol is None else rtol
    atol = pairsim_settings.ATOL if atol is None else atol
    if not t_end > 0:
        raise InvalidSpecError("t_end must be > 0")
    if not (rtol > 0 and atol > 0):
        raise InvalidSpecError("tolerances must be > 0")
    start = rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix(rho0)
    grid = _output_grid(t_end, t_eval, n_points)

    fun = _rhs_function(spec)
    min_step = pairsim_settings.MIN_STEP
    max_steps = pairsim_settings.MAX_STEPS

    y = vec(start.mat).astype(complex)
    t_prev = 0.0
    h_next: Optional[float] = None
    states: List[DensityMatrix] = []
    accepted = rejected = 0
    drift = 0.0

    for t_next in grid:
        if t_next > t_prev:
            first = None if h_next is None else min(h_next, t_next - t_prev)
            solver = RK45(fun, t_prev, y, t_next, rtol=rtol, atol=atol, first_step=first)
            while solver.status == "running":
                nfev = solver.nfev
                message = solver.step()
                if solver.status == "failed":
                    logger.error("integration failed at t=%g: %s", solver.t, message)
                    raise StiffnessError(solver.t, solver.h_abs)
                attempts = max((solver.nfev - nfev) // RK45_STAGES, 1)
                accepted += 1
                rejected += attempts - 1
                solver.y = _symmetrize(solver.y)
                solver.f = fun(solver.t, solver.y)
                drift = max(drift, abs(np.trace(unvec(solver.y)) - 1.0))
                if solver.status == "running" and solver.h_abs < min_step:
                    logger.error("step size %g below %g at t=%g", solver.h_abs, min_step, solver.t)
                    raise StiffnessError(solver.t, solver.h_abs)
                if accepted > max_steps:
                    logger.error("step budget of %d exhausted at t=%g", max_steps, solver.t)
                    raise StiffnessError(solver.t, solver.h_abs, steps=accepted)
            y = solver.y
            h_next = solver.h_abs
            t_prev = t_next
        state = unvec(y)
        violations = check_physical(state, TRAJECTORY_TOL)
        if violations:
            raise NonPhysicalStateError(
                f"integrated state at t={t_next:g} is not physical: " + "; ".join(violations),
                violations,
            )
        states.append(DensityMatrix(state, validate=False))

    logger.debug(
        "evolve: %d accepted, %d rejected steps, trace drift %.2e", accepted, rejected, drift
    )
    return Trajectory(
        times=grid,
        states=states,
        accepted_steps=accepted,
        rejected_steps=rejected,
        max_trace_drift=float(drift),
    )


# ---------------------------------------------------------------------------
# Stationary state
# ---------------------------------------------------------------------------

@dataclass
class StationaryResult:
    """
    Stationary state and how it was obtained.

    Attributes:
        rho_inf (DensityMatrix): Stationary state in `frame`.
        method (str): "linear-solve", "null-space" or "long-time".
        residual (float): |L vec(rho_inf)| divided by the spectral norm of L.
        approximate (bool): True when a rotating mu2 term was left out.
        frame (str): "lab" for static phases, "rotating" for driven ones.
        reduction (FrameReduction, optional): Frame change used for driven models.
    """

    rho_inf: DensityMatrix
    method: str
    residual: float
    approximate: bool = False
    frame: str = FRAME_LAB
    reduction: Optional[FrameReduction] = field(default=None, repr=False)

    def lab_state(self, t: float) -> DensityMatrix:
        """Stationary state seen in the lab frame at time t."""
        if self.reduction is None:
            return self.rho_inf
        return self.reduction.to_lab(self.rho_inf, t)

    def to_dict(self) -> dict:
        return {
            "rho_inf": self.rho_inf.to_dict(),
            "method": self.method,
            "residual": self.residual,
            "approximate": self.approximate,
            "frame": self.frame,
        }


def _residual(L: np.ndarray, rho: np.ndarray) -> float:
    scale = max(np.linalg.norm(L, 2), 1.0)
    return float(np.linalg.norm(L @ vec(rho)) / scale)


def _linear_solve(spec: ModelSpec) -> Optional[np.ndarray]:
    gen = blochvec.generator(spec)
    cond = gen.condition_number()
    if not np.isfinite(cond) or cond > pairsim_settings.COND_THRESHOLD:
        logger.warning("coherent-vector system ill-conditioned (cond=%.3g), falling back", cond)
        return None
    return blochvec.decode(gen.stationary()).mat


def _null_space(L: np.ndarray) -> Optional[np.ndarray]:
    kernel = null_space(L, rcond=1.0 / pairsim_settings.COND_THRESHOLD)
    if kernel.shape[1] > 1:
        raise NoUniqueSteadyStateError(f"Liouvillian kernel has dimension {kernel.shape[1]}")
    if kernel.shape[1] == 0:
        logger.warning("Liouvillian has no numerical kernel, falling back")
        return None
    rho = unvec(kernel[:, 0])
    trace = np.trace(rho)
    if abs(trace) < 1e-300:
        return None
    return hermitian_part(rho / trace)


def _long_time(spec: ModelSpec) -> np.ndarray:
    t_end = pairsim_settings.LONG_TIME_FACTOR / spec.gamma1
    return evolve(spec, maximally_mixed(), t_end, n_points=2).final.mat


def stationary_numeric(spec: ModelSpec, method: str = METHOD_AUTO) -> StationaryResult:
    """
    Exact stationary state of a model.

    Args:
        spec (ModelSpec): Static-phase model, or driven model whose drive
            frequency equals w_a1 + w_a2.
        method (str): "auto" (linear-solve, then null-space, then long-time)
            or one of those three names to force a path.

    Returns:
        StationaryResult

    Raises:
        NoUniqueSteadyStateError: If gamma1 == 0 or the kernel is degenerate.
        UnsupportedFrameError: If a driven model is off resonance.
        InvalidSpecError: On an unknown method.

    Example:
        >>> spec = ModelSpec(mu1=0.0, omega_a1=50, omega_a2=50, gamma1=1.0)
        >>> stationary_numeric(spec).rho_inf.element("00", "00")
        (1+0j)
    """
    if method not in METHODS:
        raise InvalidSpecError(f"unknown stationary method {method!r}")
    if spec.gamma1 == 0:
        raise NoUniqueSteadyStateError("gamma1 = 0: the stationary state is not unique")

    reduction = None
    work = spec
    if spec.is_driven:
        reduction = rotating_frame(spec)
        work = reduction.spec
        if reduction.approximate:
            logger.warning(
                "mu2=%g rotates at %g in the rotating frame; stationary state is approximate",
                reduction.residual_mu2,
                reduction.residual_frequency,
            )

    L = liouvillian(work)
    order = (METHOD_LINEAR, METHOD_NULL_SPACE, METHOD_LONG_TIME) if method == METHOD_AUTO else (method,)
    rho = None
    used = None
    for candidate in order:
        if candidate == METHOD_LINEAR:
            rho = _linear_solve(work)
        elif candidate == METHOD_NULL_SPACE:
            rho = _null_space(L)
        else:
            rho = _long_time(work)
        if rho is not None:
            used = candidate
            break
    if rho is None:
        raise NoUniqueSteadyStateError(f"method {method!r} found no stationary state")

    residual = _residual(L, rho)
    if residual > pairsim_settings.RESIDUAL_BOUND and used != METHOD_LONG_TIME:
        logger.warning("stationary residual %.3e exceeds bound (method %s)", residual, used)
    return StationaryResult(
        rho_inf=DensityMatrix(rho),
        method=used,
        residual=residual,
        approximate=bool(reduction is not None and reduction.approximate),
        frame=FRAME_ROTATING if reduction is not None else work.frame,
        reduction=reduction,
    )
