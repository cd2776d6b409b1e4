"""
Closed-form stationary states and optimal couplings.

Strong regime (static phase th1), with R = sqrt(Omega^2 + 64 G2^2):

    p    = (R / 8 mu1) / (2 G2 / G1 + R^2 / 64 mu1^2)
    phi  = arctan(-8 G2 / Omega)
    beta = (1 - sqrt(1 - 8 G2 p^2 / G1)) / 8
    C    = max{(8 mu1 R - 64 mu1^2 G2/G1) / (128 mu1^2 G2/G1 + R^2), 0}
    F    = (4 mu1 R - 32 mu1^2 G2/G1) / (128 mu1^2 G2/G1 + R^2) + 1/2

The stationary state is diag(1 - 3 beta, beta, beta, beta) plus the coherence
(p/2) e^{-i psi} on |00><11|, psi = pi - th1 - phi, and F is the overlap with
`bell_target(psi)`. The printed root for beta holds while
128 mu1^2 G2 <= G1 R^2; past that point the root changes sign
(`StrongSolution.branch_valid`). C and F above are exact on both sides.

Weak regime (driven phase th1 = Omega t + phi0): the same expressions in the
rotating frame, i.e. with Omega = 0 and th1 = phi0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from pairsim.exceptions import FormulaDomainError, InvalidSpecError, NoSolutionError
from pairsim.measures import bell_target
from pairsim.model import ModelSpec, rotating_frame
from pairsim.quantum_core import DensityMatrix

logger = logging.getLogger(__name__)

SQRT5 = math.sqrt(5.0)
GOLDEN = SQRT5 + 1.0  # sqrt(5) + 1, appears in every optimality condition
C_LIMIT = (SQRT5 - 1.0) / 4.0
F_LIMIT = (SQRT5 + 3.0) / 8.0

RADICAND_TOL = 1e-12


def _require_positive_gamma1(gamma1: float) -> None:
    if not gamma1 > 0:
        raise InvalidSpecError("closed forms need gamma1 > 0")


def _gamma2(gamma1: float, gamma_phi: float) -> float:
    if gamma_phi < 0:
        raise InvalidSpecError("gamma_phi must be >= 0")
    return gamma1 / 2.0 + gamma_phi


def wrap_phase(angle: float) -> float:
    """Map to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def mixing_phase(Omega: float, gamma2: float) -> float:
    """phi = arctan(-8 G2 / Omega); -pi/2 at Omega = 0."""
    return math.atan2(-8.0 * gamma2, Omega)


def target_phase(theta1: float, phi: float) -> float:
    """Phase of the Bell state the stationary coherence points at."""
    return wrap_phase(math.pi - theta1 - phi)


def _root_sign(mu1: float, R: float, gamma1: float, gamma2: float) -> Tuple[float, bool]:
    """Sign of sqrt(1 - 8 G2 p^2 / G1) consistent with the stationary populations."""
    branch_valid = 128.0 * mu1 ** 2 * gamma2 <= gamma1 * R ** 2
    return (1.0 if branch_valid else -1.0), branch_valid


def _root(weight: float, gamma1: float, gamma2: float, sign: float, what: str) -> float:
    radicand = 1.0 - 8.0 * gamma2 * weight ** 2 / gamma1
    if radicand < -RADICAND_TOL:
        raise FormulaDomainError(f"{what}: negative radicand", radicand)
    return sign * math.sqrt(max(radicand, 0.0))


def _stationary_matrix(beta: float, weight: float, psi: float) -> DensityMatrix:
    mat = np.diag([1.0 - 3.0 * beta, beta, beta, beta]).astype(complex)
    mat[0, 3] = 0.5 * weight * np.exp(-1j * psi)
    mat[3, 0] = np.conj(mat[0, 3])
    return DensityMatrix(mat)


@dataclass(frozen=True)
class StrongSolution:
    """
    Closed-form stationary state for a static phase.

    Attributes:
        p (float): Weight of the maximally entangled component.
        phi (float): Mixing phase arctan(-8 G2 / Omega).
        beta (float): Excited-population parameter of the separable part.
        rho_inf (DensityMatrix): Stationary state.
        C (float): Stationary concurrence.
        F (float): Overlap with `target`.
        target_phase (float): psi with target = bell_target(psi).
        branch_valid (bool): Whether the printed root for beta applies.
    """

    p: float
    phi: float
    beta: float
    rho_inf: DensityMatrix
    C: float
    F: float
    target_phase: float
    branch_valid: bool

    @property
    def target(self) -> DensityMatrix:
        return bell_target(self.target_phase)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "phi": self.phi,
            "beta": self.beta,
            "C": self.C,
            "F": self.F,
            "target_phase": self.target_phase,
            "branch_valid": self.branch_valid,
            "rho_inf": self.rho_inf.to_dict(),
        }


def strong_stationary(
    Omega: float, mu1: float, theta1: float, Gamma1: float, Gamma_phi: float
) -> StrongSolution:
    """
    Closed-form stationary state, concurrence and fidelity for a static phase.

    Args:
        Omega (float): omega_a1 + omega_a2 (may be 0 for rotating-frame use).
        mu1 (float): Pump coupling (>= 0).
        theta1 (float): Static phase of the pump coupling.
        Gamma1 (float): Relaxation rate (> 0).
        Gamma_phi (float): Pure dephasing rate.

    Returns:
        StrongSolution

    Raises:
        InvalidSpecError: If Gamma1 <= 0 or mu1 < 0.
        FormulaDomainError: If the beta radicand is negative.

    Example:
        >>> mu1 = math.sqrt(100**2 + 16) / (4 * (math.sqrt(5) + 1))
        >>> round(strong_stationary(100, mu1, 0.0, 1.0, 0.0).C, 6)
        0.309017
    """
    _require_positive_gamma1(Gamma1)
    if mu1 < 0:
        raise InvalidSpecError("mu1 must be >= 0")
    g2 = _gamma2(Gamma1, Gamma_phi)
    R = math.hypot(Omega, 8.0 * g2)
    phi = mixing_phase(Omega, g2)
    psi = target_phase(theta1, phi)

    if mu1 == 0.0:
        return StrongSolution(
            p=0.0,
            phi=phi,
            beta=0.0,
            rho_inf=_stationary_matrix(0.0, 0.0, psi),
            C=0.0,
            F=0.5,
            target_phase=psi,
            branch_valid=True,
        )

    ratio = g2 / Gamma1
    denom = 128.0 * mu1 ** 2 * ratio + R ** 2
    p = 8.0 * mu1 * R / denom
    sign, branch_valid = _root_sign(mu1, R, Gamma1, g2)
    beta = (1.0 - _root(p, Gamma1, g2, sign, "beta")) / 8.0
    C = max((8.0 * mu1 * R - 64.0 * mu1 ** 2 * ratio) / denom, 0.0)
    F = (4.0 * mu1 * R - 32.0 * mu1 ** 2 * ratio) / denom + 0.5
    if not branch_valid:
        logger.debug("beta root past its printed branch (mu1=%g, R=%g)", mu1, R)
    return StrongSolution(
        p=p,
        phi=phi,
        beta=beta,
        rho_inf=_stationary_matrix(beta, p, psi),
        C=C,
        F=F,
        target_phase=psi,
        branch_valid=branch_valid,
    )


@dataclass(frozen=True)
class OptimalPoint:
    """Best coupling and the concurrence/fidelity it reaches."""

    mu1_opt: float
    C_max: float
    F_max: float

    def to_dict(self) -> dict:
        return {"mu1_opt": self.mu1_opt, "C_max": self.C_max, "F_max": self.F_max}


def c_max_for_ratio(ratio: float) -> float:
    """1/4 (sqrt(2 G1/G2 + 1) - 1)."""
    return 0.25 * (math.sqrt(2.0 * ratio + 1.0) - 1.0)


def _optimal_values(gamma1: float, gamma2: float) -> Tuple[float, float]:
    c_max = c_max_for_ratio(gamma1 / gamma2)
    return c_max, c_max / 2.0 + 0.5


def _optimal_denominator(gamma1: float, gamma2: float) -> float:
    return math.sqrt(2.0 * gamma1 * gamma2 + gamma2 ** 2) + gamma2


def strong_optimal(Omega: float, Gamma1: float, Gamma_phi: float) -> OptimalPoint:
    """
    Coupling mu1 that maximizes the static-phase stationary concurrence.

    mu1_opt = (G1/8) sqrt(Omega^2 + 64 G2^2) / (sqrt(2 G1 G2 + G2^2) + G2)
    """
    _require_positive_gamma1(Gamma1)
    g2 = _gamma2(Gamma1, Gamma_phi)
    R = math.hypot(Omega, 8.0 * g2)
    mu1 = Gamma1 / 8.0 * R / _optimal_denominator(Gamma1, g2)
    c_max, f_max = _optimal_values(Gamma1, g2)
    return OptimalPoint(mu1_opt=mu1, C_max=c_max, F_max=f_max)


def strong_optimal_omega(mu1: float, Gamma1: float, Gamma_phi: float) -> float:
    """
    Qubit-frequency sum Omega at which a given mu1 is optimal.

    This is the "tune the frequencies" use of the optimality condition.

    Raises:
        NoSolutionError: If mu1 is below the Omega = 0 optimum, where no
            frequency sum makes it optimal.
    """
    _require_positive_gamma1(Gamma1)
    g2 = _gamma2(Gamma1, Gamma_phi)
    R = 8.0 * mu1 * _optimal_denominator(Gamma1, g2) / Gamma1
    floor = 8.0 * g2
    if R < floor:
        raise NoSolutionError(
            f"mu1={mu1:g} is below the smallest optimal coupling {floor * Gamma1 / (8 * _optimal_denominator(Gamma1, g2)):g}"
        )
    return math.sqrt(R ** 2 - floor ** 2)


def weak_to_strong_bound(Omega: float, Gamma1: float, Gamma_phi: float) -> float:
    """
    Lower bound G1 Omega / (8 (sqrt5 + 1) G2) on the static-phase optimal mu1.

    When the available coupling is far below this bound the static phase cannot
    reach the optimum and the driven phase is needed.
    """
    _require_positive_gamma1(Gamma1)
    g2 = _gamma2(Gamma1, Gamma_phi)
    return Gamma1 * Omega / (8.0 * GOLDEN * g2)


@dataclass(frozen=True)
class WeakSolution:
    """
    Stationary state for a driven phase th1 = Omega t + phi0.

    `rho_rotating` is the state in the rotating frame; the lab-frame state at
    time t follows from `analytic.lab_frame_state`.
    """

    weight: float
    beta_tilde: float
    C: float
    F: float
    phi0: float
    target_phase: float
    rho_rotating: DensityMatrix
    branch_valid: bool

    @property
    def target(self) -> DensityMatrix:
        return bell_target(self.target_phase)

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "beta_tilde": self.beta_tilde,
            "C": self.C,
            "F": self.F,
            "phi0": self.phi0,
            "target_phase": self.target_phase,
            "branch_valid": self.branch_valid,
            "rho_rotating": self.rho_rotating.to_dict(),
        }


def weak_stationary(
    mu1: float, Gamma1: float, Gamma_phi: float, phi0: float = 0.0
) -> WeakSolution:
    """
    Closed-form stationary solution for the driven phase.

        weight = mu1 G1 / (2 mu1^2 + G1 G2)
        C = max{mu1 (G1 - mu1) / (2 mu1^2 + G2 G1), 0}
        F = mu1 (G1 - mu1) / (4 mu1^2 + 2 G1 G2) + 1/2

    Raises:
        InvalidSpecError: If Gamma1 <= 0 or mu1 < 0.
        FormulaDomainError: If the beta radicand is negative.
    """
    _require_positive_gamma1(Gamma1)
    if mu1 < 0:
        raise InvalidSpecError("mu1 must be >= 0")
    g2 = _gamma2(Gamma1, Gamma_phi)
    weight = mu1 * Gamma1 / (2.0 * mu1 ** 2 + Gamma1 * g2)
    sign, branch_valid = _root_sign(mu1, 8.0 * g2, Gamma1, g2)
    beta = (1.0 - _root(weight, Gamma1, g2, sign, "beta_tilde")) / 8.0
    numerator = mu1 * (Gamma1 - mu1)
    C = max(numerator / (2.0 * mu1 ** 2 + g2 * Gamma1), 0.0)
    F = numerator / (4.0 * mu1 ** 2 + 2.0 * Gamma1 * g2) + 0.5
    psi = target_phase(phi0, mixing_phase(0.0, g2))
    return WeakSolution(
        weight=weight,
        beta_tilde=beta,
        C=C,
        F=F,
        phi0=phi0,
        target_phase=psi,
        rho_rotating=_stationary_matrix(beta, weight, psi),
        branch_valid=branch_valid,
    )


def weak_optimal(Gamma1: float, Gamma_phi: float) -> OptimalPoint:
    """mu1_opt = G1 G2 / (sqrt(2 G1 G2 + G2^2) + G2)."""
    _require_positive_gamma1(Gamma1)
    g2 = _gamma2(Gamma1, Gamma_phi)
    mu1 = Gamma1 * g2 / _optimal_denominator(Gamma1, g2)
    c_max, f_max = _optimal_values(Gamma1, g2)
    return OptimalPoint(mu1_opt=mu1, C_max=c_max, F_max=f_max)


def cmax_curve(ratios: Iterable[float]) -> List[Tuple[float, float, float]]:
    """
    (ratio, C_max, F_max) for each G1/G2 in (0, 2].

    Raises:
        FormulaDomainError: For ratios above 2 (G2 >= G1/2 always).
        InvalidSpecError: For non-positive ratios.
    """
    rows = []
    for ratio in ratios:
        ratio = float(ratio)
        if ratio <= 0:
            raise InvalidSpecError(f"ratio must be > 0, got {ratio:g}")
        if ratio > 2.0:
            raise FormulaDomainError("G1/G2 cannot exceed 2", 2.0 - ratio)
        c_max = c_max_for_ratio(ratio)
        rows.append((ratio, c_max, c_max / 2.0 + 0.5))
    return rows


# ---------------------------------------------------------------------------
# Model-level helpers
# ---------------------------------------------------------------------------

def closed_form(spec: ModelSpec):
    """
    Closed-form solution matching the spec's phase.

    Returns:
        StrongSolution for static phases (lab or rotating frame),
        WeakSolution for driven phases.
    """
    if spec.is_driven:
        return weak_stationary(spec.mu1, spec.gamma1, spec.gamma_phi, spec.phase1.phi0)
    return strong_stationary(spec.Omega, spec.mu1, spec.theta1, spec.gamma1, spec.gamma_phi)


def closed_form_optimum(spec: ModelSpec) -> OptimalPoint:
    if spec.is_driven:
        return weak_optimal(spec.gamma1, spec.gamma_phi)
    return strong_optimal(spec.Omega, spec.gamma1, spec.gamma_phi)


def target_state(spec: ModelSpec) -> DensityMatrix:
    """
    Bell state the stationary coherence points at.

    Static phases use the lab frame; driven phases use the rotating frame,
    where the target is time independent.
    """
    g2 = spec.Gamma2
    if spec.is_driven:
        return bell_target(target_phase(spec.phase1.phi0, mixing_phase(0.0, g2)))
    return bell_target(target_phase(spec.theta1, mixing_phase(spec.Omega, g2)))


def lab_frame_target(spec: ModelSpec, t: float) -> DensityMatrix:
    """
    Time-dependent lab-frame target of a driven model.

    Its |00><11| phase advances as e^{i Omega t}. Static models return the
    fixed target.
    """
    if not spec.is_driven:
        return target_state(spec)
    reduction = rotating_frame(spec)
    return reduction.to_lab(target_state(spec), t)


def lab_frame_state(spec: ModelSpec, rho_rotating, t: float) -> DensityMatrix:
    """Rotating-frame state of a driven model seen in the lab frame at time t."""
    return rotating_frame(spec).to_lab(rho_rotating, t)


def default_mu1_bounds(spec: ModelSpec) -> Tuple[float, float]:
    """Search interval that brackets the closed-form optimum with margin."""
    opt = closed_form_optimum(spec).mu1_opt
    return (opt / 4.0, opt * 4.0)


