"""
Coherent-vector form of the two-qubit model.

A state is written rho = I/4 + sum_i m_i B_i over fifteen orthonormal
traceless Hermitian matrices B_i, and the master equation becomes the affine
system dm/dt = A m + g. The basis order below is fixed: the block slices
(`P_BLOCK`, `EPS_BLOCK`, `ETA_BLOCK`) and every block check depend on it.

    index  0-3    O14x, O14y, O23x, O23y              (p block)
    index  4-11   sx1/2, sy1/2, sx2/2, sy2/2,
                  sx sz/2, sz sx/2, sy sz/2, sz sy/2  (eps block)
    index 12-14   O14z, O23z, sz sz/2                 (eta block)

O14 and O23 act on the {|00>, |11>} and {|01>, |10>} subspaces.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from pairsim import analytic
from pairsim.exceptions import InvalidSpecError, RequiresRotatingFrameError
from pairsim.model import ModelSpec, liouvillian
from pairsim.quantum_core import (
    I4,
    ArrayLike,
    DensityMatrix,
    as_matrix,
    operator_set,
    vec,
)

logger = logging.getLogger(__name__)

DIM = 15
P_BLOCK = slice(0, 4)
EPS_BLOCK = slice(4, 12)
ETA_BLOCK = slice(12, 15)

LABELS: Tuple[str, ...] = (
    "m14x", "m14y", "m23x", "m23y",
    "sx1", "sy1", "sx2", "sy2", "sxsz", "szsx", "sysz", "szsy",
    "m14z", "m23z", "mzz",
)

_R2 = 1.0 / math.sqrt(2.0)


def _pair_matrix(i: int, j: int, upper: complex, lower: complex) -> np.ndarray:
    mat = np.zeros((4, 4), dtype=complex)
    mat[i, j] = upper
    mat[j, i] = lower
    return mat


@dataclass(frozen=True)
class BasisSet:
    """
    The sixteen basis matrices, identity/2 first.

    Attributes:
        identity (np.ndarray): I/2.
        traceless (tuple[np.ndarray, ...]): The fifteen B_i in coherent-vector order.
    """

    identity: np.ndarray
    traceless: Tuple[np.ndarray, ...]

    @property
    def matrices(self) -> Tuple[np.ndarray, ...]:
        return (self.identity,) + self.traceless

    def by_label(self) -> Dict[str, np.ndarray]:
        return dict(zip(LABELS, self.traceless))

    def gram(self) -> np.ndarray:
        """Matrix of tr(X^dagger Y) over all sixteen elements."""
        stacked = np.array([vec(m) for m in self.matrices]).T
        return stacked.conj().T @ stacked

    def columns(self) -> np.ndarray:
        """16x15 matrix whose columns are vec(B_i)."""
        return np.array([vec(m) for m in self.traceless]).T


@lru_cache(maxsize=1)
def basis() -> BasisSet:
    """
    Build the orthonormal matrix basis.

    Example:
        >>> b = basis()
        >>> np.allclose(b.gram(), np.eye(16))
        True
    """
    ops = operator_set()
    sx1, sy1, sz1 = ops[1].sx, ops[1].sy, ops[1].sz
    sx2, sy2, sz2 = ops[2].sx, ops[2].sy, ops[2].sz

    traceless = (
        _pair_matrix(0, 3, _R2, _R2),
        _pair_matrix(0, 3, -1j * _R2, 1j * _R2),
        _pair_matrix(1, 2, _R2, _R2),
        _pair_matrix(1, 2, -1j * _R2, 1j * _R2),
        sx1 / 2,
        sy1 / 2,
        sx2 / 2,
        sy2 / 2,
        sx1 @ sz2 / 2,
        sz1 @ sx2 / 2,
        sy1 @ sz2 / 2,
        sz1 @ sy2 / 2,
        np.diag([_R2, 0, 0, -_R2]).astype(complex),
        np.diag([0, _R2, -_R2, 0]).astype(complex),
        sz1 @ sz2 / 2,
    )
    identity = np.array(I4 / 2)
    for m in (identity,) + traceless:
        m.setflags(write=False)
    return BasisSet(identity=identity, traceless=traceless)


class CoherentVector:
    """
    Fifteen real coordinates m_i = tr(B_i rho).

    The block views `p`, `eps` and `eta` follow the basis order.
    """

    __slots__ = ("_m",)

    def __init__(self, m: ArrayLike):
        arr = np.array(m, dtype=float, copy=True).reshape(-1)
        if arr.shape != (DIM,):
            raise InvalidSpecError(f"coherent vector needs {DIM} entries, got {arr.shape}")
        arr.setflags(write=False)
        self._m = arr

    @property
    def m(self) -> np.ndarray:
        return self._m

    @property
    def p(self) -> np.ndarray:
        return self._m[P_BLOCK]

    @property
    def eps(self) -> np.ndarray:
        return self._m[EPS_BLOCK]

    @property
    def eta(self) -> np.ndarray:
        return self._m[ETA_BLOCK]

    def __getitem__(self, label: str) -> float:
        return float(self._m[LABELS.index(label)])

    def __repr__(self) -> str:
        return f"CoherentVector(|m|={self.norm():.6g})"

    def norm(self) -> float:
        return float(np.linalg.norm(self._m))

    def decode(self) -> DensityMatrix:
        return decode(self)

    def to_dict(self) -> Dict[str, float]:
        return {label: float(v) for label, v in zip(LABELS, self._m)}


def encode(rho: ArrayLike) -> CoherentVector:
    """m_i = tr(B_i rho) for the fifteen traceless basis elements."""
    r = as_matrix(rho)
    cols = basis().columns()
    return CoherentVector(np.real(cols.conj().T @ vec(r)))


def decode(m) -> DensityMatrix:
    """
    rho = I/4 + sum_i m_i B_i.

    The result is Hermitian with unit trace by construction; positivity is
    checked by DensityMatrix.
    """
    values = m.m if isinstance(m, CoherentVector) else np.asarray(m, dtype=float)
    mat = I4 / 4 + np.tensordot(values, np.array(basis().traceless), axes=1)
    return DensityMatrix(mat)


# ---------------------------------------------------------------------------
# Affine generator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineGenerator:
    """
    dm/dt = A m + g for a static-phase model.

    Attributes:
        A (np.ndarray): Real 15x15 matrix (coherent part plus damping).
        g (np.ndarray): Real 15-vector; only the m14z entry is nonzero.
        u (tuple[float, float, float, float]): Controls
            u1 = 8 mu1 cos th1, u2 = 8 mu1 sin th1,
            u3 = 8 mu2 cos th2, u4 = -8 mu2 sin th2.
    """

    A: np.ndarray
    g: np.ndarray
    u: Tuple[float, float, float, float]

    def block(self, rows: slice, cols: slice) -> np.ndarray:
        return self.A[rows, cols]

    @property
    def damping(self) -> np.ndarray:
        """Symmetric part of A."""
        return 0.5 * (self.A + self.A.T)

    @property
    def coherent(self) -> np.ndarray:
        """Skew-symmetric part of A."""
        return 0.5 * (self.A - self.A.T)

    def rhs(self, m) -> np.ndarray:
        values = m.m if isinstance(m, CoherentVector) else np.asarray(m, dtype=float)
        return self.A @ values + self.g

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.A))

    def stationary(self) -> CoherentVector:
        """m = -A^{-1} g."""
        return CoherentVector(np.linalg.solve(self.A, -self.g))


def controls(spec: ModelSpec) -> Tuple[float, float, float, float]:
    th1 = spec.theta1
    return (
        8.0 * spec.mu1 * math.cos(th1),
        8.0 * spec.mu1 * math.sin(th1),
        8.0 * spec.mu2 * math.cos(spec.theta2),
        -8.0 * spec.mu2 * math.sin(spec.theta2),
    )


def generator(spec: ModelSpec) -> AffineGenerator:
    """
    Project the Liouvillian onto the coherent-vector coordinates.

    A = Re(B^dagger L B) and g = Re(B^dagger L vec(I/4)), with B the 16x15
    matrix of vectorized basis elements.

    Raises:
        RequiresRotatingFrameError: For driven phases; reduce them with
            `model.rotating_frame` first.
    """
    if spec.is_driven:
        raise RequiresRotatingFrameError(
            "the coherent-vector generator needs a static phase"
        )
    L = liouvillian(spec)
    cols = basis().columns()
    A = np.real(cols.conj().T @ L @ cols)
    g = np.real(cols.conj().T @ L @ vec(I4 / 4))
    A.setflags(write=False)
    g.setflags(write=False)
    return AffineGenerator(A=A, g=g, u=controls(spec))


def stationary_closed_form(spec: ModelSpec) -> CoherentVector:
    """
    Closed-form stationary coherent vector of a static-phase model.

    Only m14x, m14y, m14z and mzz are nonzero:

        m14x = p cos(psi) / sqrt2,  m14y = p sin(psi) / sqrt2
        m14z = (sqrt2 / 4)(1 + s r),  mzz = (1 + s r) / 4

    with r = sqrt(1 - 8 G2 p^2 / G1), psi the target phase and s the sign of
    the root (see `analytic.StrongSolution.branch_valid`).

    Raises:
        RequiresRotatingFrameError: For driven phases.
        FormulaDomainError: If the radicand is negative.
    """
    if spec.is_driven:
        raise RequiresRotatingFrameError("closed form needs a static phase")
    sol = analytic.strong_stationary(
        spec.Omega, spec.mu1, spec.theta1, spec.gamma1, spec.gamma_phi
    )
    one_minus_4beta = 1.0 - 4.0 * sol.beta
    m = np.zeros(DIM)
    m[0] = sol.p * math.cos(sol.target_phase) * _R2
    m[1] = sol.p * math.sin(sol.target_phase) * _R2
    m[12] = one_minus_4beta * _R2
    m[14] = one_minus_4beta / 2.0
    return CoherentVector(m)
