"""
Exception hierarchy for pairsim.

Every error raised on purpose by the numeric modules derives from
`PairSimError`. The CLI maps `InvalidSpecError` to exit code 1 and every other
`PairSimError` to exit code 2; the API maps them to HTTP 400 and 422.
"""

from __future__ import annotations

from typing import Any, List, Optional, Sequence


class PairSimError(Exception):
    """Base class for pairsim failures."""


class InvalidSpecError(PairSimError, ValueError):
    """A spec (model, circuit, sweep) or argument is malformed or out of range."""


class NonPhysicalStateError(PairSimError):
    """A matrix that should be a density matrix is not Hermitian, unit-trace or PSD."""

    def __init__(self, message: str, violations: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.violations: List[str] = list(violations or [])


class UnsupportedFrameError(PairSimError):
    """The drive frequency does not match the rotating frame ω_a1 + ω_a2."""


class RequiresRotatingFrameError(PairSimError):
    """A static-phase operation was given a driven model."""


class NoUniqueSteadyStateError(PairSimError):
    """The generator has no unique stationary state (e.g. Γ₁ = 0)."""


class StiffnessError(PairSimError):
    """The adaptive integrator could not advance: step underflow or step budget exhausted."""

    def __init__(self, t: float, step: float, steps: Optional[int] = None):
        if steps is None:
            message = f"step size {step:.3g} below minimum at t={t:.12g}"
        else:
            message = f"step budget exhausted after {steps} steps at t={t:.12g}"
        super().__init__(message)
        self.t = t
        self.step = step
        self.steps = steps


class FormulaDomainError(PairSimError):
    """A closed-form square root was evaluated outside its domain."""

    def __init__(self, message: str, radicand: float):
        super().__init__(f"{message} (radicand={radicand:.6g})")
        self.radicand = radicand


class NoSolutionError(PairSimError):
    """An optimality condition cannot be met by the circuit knob."""


class ApproximationRangeError(PairSimError):
    """A circuit approximation is used outside its stated validity range."""


class DispersiveRegimeError(PairSimError):
    """One or more dispersive-regime inequalities of the cavity adapter fail."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("dispersive regime violated: " + "; ".join(violations))
        self.violations: List[str] = list(violations)


class SweepError(PairSimError):
    """Every point of a sweep failed."""

    def __init__(self, message: str, rows: Optional[List[dict]] = None):
        super().__init__(message)
        self.rows = rows or []


class RefinementNeededError(PairSimError):
    """The optimizer's pre-scan found a profile that is not unimodal."""

    def __init__(self, message: str, scan: Any = None):
        super().__init__(message)
        self.scan = scan
