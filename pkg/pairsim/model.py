"""
Two-qubit model: Hamiltonian, Lindblad generator and rotating-frame reduction.

    H(t) = sum_j (w_aj / 2) sz_j
           + mu1 (e^{-i th1(t)} s+ s+  + e^{i th1(t)} s- s-)
           + mu2 (e^{i th2} s- s+  + e^{-i th2} s+ s-)

    drho/dt = -i[H, rho] + sum_j G1 D[s-_j] rho + sum_j 2 Gphi D[sz_j] rho

th1(t) is either a constant (StaticPhase) or Omega_drive * t + phi0
(DrivenPhase). All frequencies and rates share one angular unit (hbar = 1).
Superoperators are 16x16 complex matrices acting on column-stacked vec(rho).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from pairsim.exceptions import (
    InvalidSpecError,
    RequiresRotatingFrameError,
    UnsupportedFrameError,
)
from pairsim.quantum_core import (
    I4,
    ArrayLike,
    DensityMatrix,
    as_matrix,
    dagger,
    operator_set,
    require_hermitian,
)

logger = logging.getLogger(__name__)

FRAME_LAB = "lab"
FRAME_ROTATING = "rotating"

# Relative tolerance when matching Omega_drive to w_a1 + w_a2.
FRAME_MATCH_RTOL = 1e-12


def _finite(name: str, value: Any) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidSpecError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(number):
        raise InvalidSpecError(f"{name} must be finite, got {value!r}")
    return number


@dataclass(frozen=True)
class StaticPhase:
    """Constant coupling phase th1 (radians)."""

    theta1: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta1", _finite("theta1", self.theta1))

    def theta_at(self, t: float) -> float:
        return self.theta1

    def to_dict(self) -> Dict[str, Any]:
        return {"static": self.theta1}


@dataclass(frozen=True)
class DrivenPhase:
    """th1(t) = omega * t + phi0 with omega >= 0."""

    omega: float
    phi0: float = 0.0

    def __post_init__(self):
        omega = _finite("phase1.driven.omega", self.omega)
        if omega < 0:
            raise InvalidSpecError("drive frequency must be >= 0")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "phi0", _finite("phase1.driven.phi0", self.phi0))

    def theta_at(self, t: float) -> float:
        return self.omega * t + self.phi0

    def to_dict(self) -> Dict[str, Any]:
        return {"driven": {"omega": self.omega, "phi0": self.phi0}}


PhaseSpec = Union[StaticPhase, DrivenPhase]


def phase_from_dict(data: Any) -> PhaseSpec:
    """
    Parse `{"static": th}` or `{"driven": {"omega": W, "phi0": p}}`.

    A bare number is accepted as a static phase.
    """
    if isinstance(data, (int, float)):
        return StaticPhase(data)
    if not isinstance(data, dict) or len(data) != 1:
        raise InvalidSpecError(
            'phase1 must be {"static": theta} or {"driven": {"omega": .., "phi0": ..}}'
        )
    if "static" in data:
        return StaticPhase(data["static"])
    if "driven" in data:
        driven = data["driven"]
        if not isinstance(driven, dict) or "omega" not in driven:
            raise InvalidSpecError("driven phase needs an 'omega' entry")
        return DrivenPhase(driven["omega"], driven.get("phi0", 0.0))
    raise InvalidSpecError(f"unknown phase kind {next(iter(data))!r}")


@dataclass(frozen=True)
class ModelSpec:
    """
    Parameters of the two-qubit model.

    Attributes:
        mu1 (float): |00>-|11> coupling strength (>= 0).
        phase1 (PhaseSpec): Static or driven phase of the mu1 term.
        mu2 (float): |01>-|10> coupling strength (>= 0).
        theta2 (float): Phase of the mu2 term.
        omega_a1, omega_a2 (float): Qubit frequencies (> 0 in the lab frame).
        gamma1 (float): Relaxation rate per qubit.
        gamma_phi (float): Pure dephasing rate per qubit.
        frame (str): "lab", or "rotating" for specs produced by `rotating_frame`
            (which carry w_a = 0).
    """

    mu1: float
    omega_a1: float
    omega_a2: float
    gamma1: float
    gamma_phi: float = 0.0
    phase1: PhaseSpec = field(default_factory=StaticPhase)
    mu2: float = 0.0
    theta2: float = 0.0
    frame: str = FRAME_LAB

    def __post_init__(self):
        for name in ("mu1", "omega_a1", "omega_a2", "gamma1", "gamma_phi", "mu2", "theta2"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if not isinstance(self.phase1, (StaticPhase, DrivenPhase)):
            raise InvalidSpecError("phase1 must be a StaticPhase or DrivenPhase")
        for name in ("mu1", "mu2", "gamma1", "gamma_phi"):
            if getattr(self, name) < 0:
                raise InvalidSpecError(f"{name} must be >= 0")
        if self.frame == FRAME_LAB:
            if self.omega_a1 <= 0 or self.omega_a2 <= 0:
                raise InvalidSpecError("qubit frequencies must be > 0")
        elif self.frame == FRAME_ROTATING:
            if self.omega_a1 < 0 or self.omega_a2 < 0:
                raise InvalidSpecError("qubit frequencies must be >= 0")
        else:
            raise InvalidSpecError(f"unknown frame {self.frame!r}")

    @property
    def Omega(self) -> float:
        return self.omega_a1 + self.omega_a2

    @property
    def Gamma2(self) -> float:
        return self.gamma1 / 2 + self.gamma_phi

    @property
    def is_driven(self) -> bool:
        return isinstance(self.phase1, DrivenPhase)

    @property
    def theta1(self) -> float:
        """Static phase; raises for driven specs."""
        if self.is_driven:
            raise RequiresRotatingFrameError(
                "driven model has no static theta1; apply rotating_frame first"
            )
        return self.phase1.theta1

    def with_updates(self, **changes: Any) -> "ModelSpec":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "mu1": self.mu1,
            "phase1": self.phase1.to_dict(),
            "mu2": self.mu2,
            "theta2": self.theta2,
            "omega_a1": self.omega_a1,
            "omega_a2": self.omega_a2,
            "gamma1": self.gamma1,
            "gamma_phi": self.gamma_phi,
        }
        if self.frame != FRAME_LAB:
            data["frame"] = self.frame
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelSpec":
        """
        Build a ModelSpec from its JSON form.

        Raises:
            InvalidSpecError: On missing/unknown keys or out-of-range values.
        """
        if not isinstance(data, dict):
            raise InvalidSpecError("model spec must be a JSON object")
        required = ("mu1", "omega_a1", "omega_a2", "gamma1")
        missing = [k for k in required if k not in data]
        if missing:
            raise InvalidSpecError(f"missing model fields: {', '.join(missing)}")
        known = set(required) | {"phase1", "mu2", "theta2", "gamma_phi", "frame"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidSpecError(f"unknown model fields: {', '.join(unknown)}")
        return cls(
            mu1=data["mu1"],
            omega_a1=data["omega_a1"],
            omega_a2=data["omega_a2"],
            gamma1=data["gamma1"],
            gamma_phi=data.get("gamma_phi", 0.0),
            phase1=phase_from_dict(data.get("phase1", {"static": 0.0})),
            mu2=data.get("mu2", 0.0),
            theta2=data.get("theta2", 0.0),
            frame=data.get("frame", FRAME_LAB),
        )


# ---------------------------------------------------------------------------
# Hamiltonian
# ---------------------------------------------------------------------------

def _pair_operators() -> Tuple[np.ndarray, np.ndarray]:
    ops = operator_set()
    pump = ops[1].splus @ ops[2].splus  # 4 |11><00|
    hop = ops[1].sminus @ ops[2].splus  # 4 |01><10|
    return pump, hop


def static_hamiltonian(spec: ModelSpec) -> np.ndarray:
    """Time-independent part: qubit frequencies plus the mu2 exchange term."""
    ops = operator_set()
    _, hop = _pair_operators()
    h = 0.5 * spec.omega_a1 * ops[1].sz + 0.5 * spec.omega_a2 * ops[2].sz
    h = h + spec.mu2 * (np.exp(1j * spec.theta2) * hop + np.exp(-1j * spec.theta2) * dagger(hop))
    return h


def pump_operator(spec: ModelSpec) -> np.ndarray:
    """mu1 s+ s+; H(t) = H_static + e^{-i th1} P + e^{i th1} P^dagger."""
    pump, _ = _pair_operators()
    return spec.mu1 * pump


def hamiltonian_at(spec: ModelSpec, t: float = 0.0) -> np.ndarray:
    """
    Hamiltonian matrix at time `t`.

    Returns:
        np.ndarray: Hermitian 4x4; <11|H|00> = 4 mu1 e^{-i th1(t)} and
        <01|H|10> = 4 mu2 e^{i th2}.
    """
    theta = spec.phase1.theta_at(t)
    p = pump_operator(spec)
    h = static_hamiltonian(spec) + np.exp(-1j * theta) * p + np.exp(1j * theta) * dagger(p)
    return require_hermitian(h, "Hamiltonian")


# ---------------------------------------------------------------------------
# Lindblad generator
# ---------------------------------------------------------------------------

def dissipator(L: np.ndarray, rho: ArrayLike) -> np.ndarray:
    """D[L] rho = L rho L^dagger - 1/2 {L^dagger L, rho}."""
    r = as_matrix(rho)
    L = np.asarray(L, dtype=complex)
    if L.shape != r.shape:
        raise InvalidSpecError(f"shape mismatch {L.shape} vs {r.shape}")
    ld = dagger(L)
    ldl = ld @ L
    return L @ r @ ld - 0.5 * (ldl @ r + r @ ldl)


def collapse_channels(spec: ModelSpec) -> Tuple[Tuple[float, np.ndarray], ...]:
    """(rate, operator) pairs: G1 on s-_j and 2 Gphi on sz_j."""
    ops = operator_set()
    return (
        (spec.gamma1, ops[1].sminus),
        (spec.gamma1, ops[2].sminus),
        (2 * spec.gamma_phi, ops[1].sz),
        (2 * spec.gamma_phi, ops[2].sz),
    )


def lindblad_rhs(spec: ModelSpec, rho: ArrayLike, t: float = 0.0) -> np.ndarray:
    """drho/dt at time `t`."""
    r = as_matrix(rho)
    h = hamiltonian_at(spec, t)
    out = -1j * (h @ r - r @ h)
    for rate, op in collapse_channels(spec):
        if rate:
            out = out + rate * dissipator(op, r)
    return out


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """Matrix of rho -> -i[h, rho] on vec(rho)."""
    return -1j * (np.kron(I4, h) - np.kron(h.T, I4))


def dissipator_superop(L: np.ndarray) -> np.ndarray:
    ldl = dagger(L) @ L
    return np.kron(L.conj(), L) - 0.5 * np.kron(I4, ldl) - 0.5 * np.kron(ldl.T, I4)


@dataclass(frozen=True)
class LiouvillianParts:
    """
    L(t) = static + e^{-i th1(t)} plus_part + e^{i th1(t)} minus_part.

    For static phases the phase factors are constant, see `at`.
    """

    static: np.ndarray
    plus_part: np.ndarray
    minus_part: np.ndarray
    phase: PhaseSpec

    def at(self, t: float) -> np.ndarray:
        theta = self.phase.theta_at(t)
        return self.static + np.exp(-1j * theta) * self.plus_part + np.exp(1j * theta) * self.minus_part


def liouvillian_parts(spec: ModelSpec) -> LiouvillianParts:
    static = commutator_superop(static_hamiltonian(spec))
    for rate, op in collapse_channels(spec):
        if rate:
            static = static + rate * dissipator_superop(op)
    p = pump_operator(spec)
    return LiouvillianParts(
        static=static,
        plus_part=commutator_superop(p),
        minus_part=commutator_superop(dagger(p)),
        phase=spec.phase1,
    )


def liouvillian(spec: ModelSpec, t: float = 0.0) -> np.ndarray:
    """
    Complex 16x16 generator on column-stacked vec(rho).

    unvec(L @ vec(rho)) equals `lindblad_rhs(spec, rho, t)`.
    """
    return liouvillian_parts(spec).at(t)


# ---------------------------------------------------------------------------
# Rotating frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameReduction:
    """
    Static model in the frame V(t) = exp(i t (w_a1 sz_1 + w_a2 sz_2) / 2).

    Attributes:
        spec (ModelSpec): Static rotating-frame model (w_a = 0, th1 = phi0).
            When the mu2 term keeps rotating it is left out of `spec`.
        lab_spec (ModelSpec): The driven model it came from.
        residual_frequency (float): w_a1 - w_a2, the frequency at which the
            mu2 term still rotates (0 when the frame is exact).
        residual_mu2 (float): Strength of the rotating mu2 term that `spec`
            omits (0 when nothing was dropped).
    """

    spec: ModelSpec
    lab_spec: ModelSpec
    residual_frequency: float
    residual_mu2: float

    @property
    def approximate(self) -> bool:
        return self.residual_mu2 != 0.0

    def frame_unitary(self, t: float) -> np.ndarray:
        ops = operator_set()
        gen = self.lab_spec.omega_a1 * ops[1].sz + self.lab_spec.omega_a2 * ops[2].sz
        return np.diag(np.exp(0.5j * t * np.real(np.diag(gen))))

    def to_lab(self, rho: ArrayLike, t: float) -> DensityMatrix:
        """V(t)^dagger rho V(t)."""
        v = self.frame_unitary(t)
        return DensityMatrix(dagger(v) @ as_matrix(rho) @ v, validate=False)

    def to_rotating(self, rho: ArrayLike, t: float) -> DensityMatrix:
        """V(t) rho V(t)^dagger."""
        v = self.frame_unitary(t)
        return DensityMatrix(v @ as_matrix(rho) @ dagger(v), validate=False)


def rotating_frame(spec: ModelSpec) -> FrameReduction:
    """
    Remove the qubit frequencies and the drive from a driven model.

    Args:
        spec (ModelSpec): Lab-frame model with a DrivenPhase whose frequency
            equals w_a1 + w_a2.

    Returns:
        FrameReduction: static model with th1 = phi0; the mu2 term stays static
        only for w_a1 == w_a2, otherwise it is recorded as residual.

    Raises:
        RequiresRotatingFrameError: If the phase is static.
        UnsupportedFrameError: If the drive is off resonance with w_a1 + w_a2.
    """
    if not spec.is_driven:
        raise RequiresRotatingFrameError("rotating_frame needs a driven phase")
    if spec.frame != FRAME_LAB:
        raise UnsupportedFrameError("spec is already in the rotating frame")
    drive = spec.phase1
    if not math.isclose(drive.omega, spec.Omega, rel_tol=FRAME_MATCH_RTOL, abs_tol=0.0):
        raise UnsupportedFrameError(
            f"drive frequency {drive.omega:g} differs from w_a1 + w_a2 = {spec.Omega:g}"
        )
    residual = spec.omega_a1 - spec.omega_a2
    keep_mu2 = abs(residual) <= FRAME_MATCH_RTOL * max(1.0, abs(spec.Omega)) or spec.mu2 == 0.0
    static = replace(
        spec,
        omega_a1=0.0,
        omega_a2=0.0,
        phase1=StaticPhase(drive.phi0),
        mu2=spec.mu2 if keep_mu2 else 0.0,
        frame=FRAME_ROTATING,
    )
    if not keep_mu2:
        logger.debug(
            "mu2=%g rotates at %g in the rotating frame and is left out", spec.mu2, residual
        )
    return FrameReduction(
        spec=static,
        lab_spec=spec,
        residual_frequency=residual,
        residual_mu2=0.0 if keep_mu2 else spec.mu2,
    )
