"""
Entanglement and fidelity of two-qubit states.

    concurrence      Wootters: max(l1 - l2 - l3 - l4, 0) with l_i the decreasing
                     square roots of the eigenvalues of rho (Y kron Y) rho* (Y kron Y),
                     Y the standard Pauli matrix.
    concurrence_x    2 max(|w| - sqrt(bc), |z| - sqrt(ad), 0) for X-shaped states.
    fidelity_with    overlap fidelity tr(sigma rho); equals <psi|rho|psi> when
                     sigma is pure. This is not the Uhlmann fidelity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from pairsim.exceptions import InvalidSpecError, NonPhysicalStateError
from pairsim.quantum_core import (
    SY_STANDARD,
    ArrayLike,
    DensityMatrix,
    as_matrix,
    dm_from_pure,
)

logger = logging.getLogger(__name__)

SPIN_FLIP = np.kron(SY_STANDARD, SY_STANDARD)

# Eigenvalues of the spin-flipped product below this magnitude are exact zeros
# up to round-off; keeping them would cost ~1e-8 in the square roots.
ZERO_EIGENVALUE = 1e-14
NEGATIVE_EIGENVALUE_LIMIT = -1e-8
X_STATE_TOL = 1e-10


def concurrence(rho: ArrayLike) -> float:
    """
    Wootters concurrence of a two-qubit state.

    Args:
        rho: DensityMatrix or 4x4 array.

    Returns:
        float: value in [0, 1].

    Raises:
        NonPhysicalStateError: If the spin-flipped product has an eigenvalue
            below -1e-8 (the input is not a state).

    Example:
        >>> concurrence(bell_target(0.0))
        1.0
    """
    r = as_matrix(rho)
    m = r @ SPIN_FLIP @ r.conj() @ SPIN_FLIP
    eig = np.real(np.linalg.eigvals(m))
    if np.min(eig) < NEGATIVE_EIGENVALUE_LIMIT:
        raise NonPhysicalStateError(
            f"spin-flipped product has eigenvalue {np.min(eig):.3e}; input is not a state"
        )
    eig = np.where(eig < ZERO_EIGENVALUE, 0.0, eig)
    lam = np.sort(np.sqrt(eig))[::-1]
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


@dataclass(frozen=True)
class XStateEntries:
    """
    X-shaped density matrix.

        | a . . w |
        | . b z . |
        | . z* c . |
        | w* . . d |
    """

    a: float
    b: float
    c: float
    d: float
    w: complex = 0j
    z: complex = 0j

    def __post_init__(self):
        total = self.a + self.b + self.c + self.d
        if abs(total - 1.0) > X_STATE_TOL:
            raise InvalidSpecError(f"populations sum to {total:.12g}, not 1")
        if min(self.a, self.b, self.c, self.d) < -X_STATE_TOL:
            raise InvalidSpecError("populations must be non-negative")
        if abs(self.w) ** 2 > self.a * self.d + X_STATE_TOL:
            raise InvalidSpecError("|w|^2 > ad: not positive semidefinite")
        if abs(self.z) ** 2 > self.b * self.c + X_STATE_TOL:
            raise InvalidSpecError("|z|^2 > bc: not positive semidefinite")

    def to_matrix(self) -> np.ndarray:
        mat = np.diag([self.a, self.b, self.c, self.d]).astype(complex)
        mat[0, 3] = self.w
        mat[3, 0] = np.conj(self.w)
        mat[1, 2] = self.z
        mat[2, 1] = np.conj(self.z)
        return mat

    def to_density_matrix(self) -> DensityMatrix:
        return DensityMatrix(self.to_matrix())

    @classmethod
    def from_matrix(cls, rho: ArrayLike) -> "XStateEntries":
        """Read the X entries; other entries are ignored."""
        r = as_matrix(rho)
        return cls(
            a=float(np.real(r[0, 0])),
            b=float(np.real(r[1, 1])),
            c=float(np.real(r[2, 2])),
            d=float(np.real(r[3, 3])),
            w=complex(r[0, 3]),
            z=complex(r[1, 2]),
        )


def concurrence_x(x: XStateEntries) -> float:
    """Closed-form concurrence of an X state."""
    bc = math.sqrt(max(x.b * x.c, 0.0))
    ad = math.sqrt(max(x.a * x.d, 0.0))
    return 2.0 * max(abs(x.w) - bc, abs(x.z) - ad, 0.0)


def fidelity_with(rho: ArrayLike, sigma: ArrayLike) -> float:
    """
    Overlap fidelity tr(sigma rho).

    Symmetric and linear in each argument.
    """
    value = np.trace(as_matrix(sigma) @ as_matrix(rho))
    return float(np.real(value))


def bell_target(phase: float) -> DensityMatrix:
    """
    (|00> + e^{i phase} |11>)(<00| + e^{-i phase} <11|) / 2.

    The |00><11| entry is e^{-i phase} / 2.
    """
    return dm_from_pure([1.0, 0.0, 0.0, np.exp(1j * phase)])


def werner_state(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1 - p) I / 4."""
    if not 0.0 <= p <= 1.0:
        raise InvalidSpecError("Werner weight must lie in [0, 1]")
    return DensityMatrix(p * bell_target(0.0).mat + (1.0 - p) * np.eye(4) / 4)
