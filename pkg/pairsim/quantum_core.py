"""
Two-qubit operator algebra and density-matrix plumbing.

Conventions used by every other module:
    - Basis order (|00>, |01>, |10>, |11>); qubit 1 is the left tensor factor.
    - |1> is the excited state: sz = diag(-1, +1), so H = (w/2) sz has |0> as
      ground state.
    - sy is chosen so that sx @ sy = i sz, i.e. sy = [[0, i], [-i, 0]].
    - Ladder operators are NOT halved: s+ = sx + i sy, s- = sx - i sy, hence
      s- |1> = 2 |0> and s+ s- = 2 (I + sz).
    - Superoperators use column stacking: vec(A X B) = (B^T kron A) vec(X).

The standard Pauli Y (used by the Wootters spin flip) is exported separately as
`SY_STANDARD`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import unitary_group

from pairsim.conf import pairsim_settings
from pairsim.exceptions import InvalidSpecError, NonPhysicalStateError

logger = logging.getLogger(__name__)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
SPLUS = SX + 1j * SY
SMINUS = SX - 1j * SY
SY_STANDARD = np.array([[0, -1j], [1j, 0]], dtype=complex)

BASIS_LABELS: Tuple[str, ...] = ("00", "01", "10", "11")

ArrayLike = Union[np.ndarray, "DensityMatrix", Sequence]

for _m in (I2, I4, SX, SY, SZ, SPLUS, SMINUS, SY_STANDARD):
    _m.setflags(write=False)


def embed(op: np.ndarray, qubit: int) -> np.ndarray:
    """
    Lift a single-qubit operator to the two-qubit space.

    Args:
        op (np.ndarray): 2x2 operator.
        qubit (int): 1 (left factor) or 2 (right factor).

    Returns:
        np.ndarray: 4x4 operator `op kron I` or `I kron op`.

    Raises:
        InvalidSpecError: If `qubit` is not 1 or 2.
    """
    if qubit == 1:
        return np.kron(op, I2)
    if qubit == 2:
        return np.kron(I2, op)
    raise InvalidSpecError(f"qubit index must be 1 or 2, got {qubit!r}")


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacked vectorization."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int = 4) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + dagger(a))


def require_hermitian(op: np.ndarray, name: str = "operator") -> np.ndarray:
    """
    Return `op` unchanged if it is Hermitian to `HERMITIAN_TOL`.

    Raises:
        InvalidSpecError: If an entry is non-finite or max|op - op^dagger|
            exceeds the tolerance.
    """
    if not np.all(np.isfinite(op)):
        raise InvalidSpecError(f"{name} has non-finite entries")
    deviation = float(np.max(np.abs(op - dagger(op))))
    if deviation > pairsim_settings.HERMITIAN_TOL * max(1.0, float(np.max(np.abs(op)))):
        raise InvalidSpecError(f"{name} is not Hermitian (max|A - A^H| = {deviation:.3e})")
    return op


@dataclass(frozen=True)
class QubitOperators:
    """The five embedded operators of one qubit (4x4 each)."""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    splus: np.ndarray
    sminus: np.ndarray


@dataclass(frozen=True)
class OperatorSet:
    """
    Embedded Pauli and ladder operators for both qubits.

    Index with the physical qubit number: `ops[1].sminus`, `ops[2].sz`.
    """

    q1: QubitOperators
    q2: QubitOperators

    def __getitem__(self, qubit: int) -> QubitOperators:
        if qubit == 1:
            return self.q1
        if qubit == 2:
            return self.q2
        raise InvalidSpecError(f"qubit index must be 1 or 2, got {qubit!r}")

    def __iter__(self) -> Iterator[QubitOperators]:
        yield self.q1
        yield self.q2


def _qubit_operators(qubit: int) -> QubitOperators:
    mats = [embed(m, qubit) for m in (SX, SY, SZ, SPLUS, SMINUS)]
    for m in mats:
        m.setflags(write=False)
    return QubitOperators(*mats)


@lru_cache(maxsize=1)
def operator_set() -> OperatorSet:
    """
    Return the ten embedded single-qubit operators.

    Returns:
        OperatorSet: read-only 4x4 arrays; `ops[j].sminus @ |1 on qubit j>` is
        twice the lowered state.

    Example:
        >>> ops = operator_set()
        >>> ops[1].sminus @ basis_state("10")
        array([2.+0.j, 0.+0.j, 0.+0.j, 0.+0.j])
    """
    return OperatorSet(_qubit_operators(1), _qubit_operators(2))


def basis_state(label: str) -> np.ndarray:
    """Computational basis ket for a label such as "01"."""
    try:
        index = BASIS_LABELS.index(label)
    except ValueError:
        raise InvalidSpecError(f"unknown basis label {label!r}") from None
    ket = np.zeros(4, dtype=complex)
    ket[index] = 1.0
    return ket


def check_physical(
    rho: ArrayLike, tol: float, positivity_tol: Optional[float] = None
) -> List[str]:
    """
    Report every way `rho` fails to be a two-qubit density matrix.

    Args:
        rho: 4x4 matrix or DensityMatrix.
        tol (float): Bound on max|rho - rho^dagger| and |tr rho - 1|.
        positivity_tol (float, optional): Allowed negative eigenvalue magnitude.
            Defaults to `tol`.

    Returns:
        list[str]: Human-readable violations; empty when the state is physical.

    Raises:
        InvalidSpecError: If `tol` is not positive.
    """
    if tol <= 0:
        raise InvalidSpecError("tolerance must be positive")
    if positivity_tol is None:
        positivity_tol = tol
    mat = as_matrix(rho)
    violations: List[str] = []
    if mat.shape != (4, 4):
        return [f"shape {mat.shape} is not (4, 4)"]
    if not np.all(np.isfinite(mat)):
        return ["non-finite entries"]
    herm_dev = float(np.max(np.abs(mat - dagger(mat))))
    if herm_dev > tol:
        violations.append(f"hermiticity: max|rho - rho^H| = {herm_dev:.3e}")
    trace_dev = abs(np.trace(mat) - 1.0)
    if trace_dev > tol:
        violations.append(f"trace: |tr rho - 1| = {trace_dev:.3e}")
    min_eig = float(np.min(np.linalg.eigvalsh(hermitian_part(mat))))
    if min_eig < -positivity_tol:
        violations.append(f"positivity: min eigenvalue = {min_eig:.3e}")
    return violations


class DensityMatrix:
    """
    Immutable 4x4 two-qubit density matrix.

    Construction validates Hermiticity and trace at `PHYSICAL_TOL` and
    positivity at `POSITIVITY_SLACK` unless `validate=False`.

    Attributes:
        mat (np.ndarray): Read-only complex 4x4 array.
    """

    __slots__ = ("_mat",)

    def __init__(self, mat: ArrayLike, validate: bool = True):
        arr = np.array(as_matrix(mat), dtype=complex, copy=True)
        if validate:
            violations = check_physical(
                arr,
                pairsim_settings.PHYSICAL_TOL,
                pairsim_settings.POSITIVITY_SLACK,
            )
            if violations:
                raise NonPhysicalStateError(
                    "not a density matrix: " + "; ".join(violations), violations
                )
        arr.setflags(write=False)
        self._mat = arr

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._mat
        return self._mat.astype(dtype)

    def __repr__(self) -> str:
        diag = ", ".join(f"{x:.4g}" for x in np.real(np.diag(self._mat)))
        return f"DensityMatrix(diag=[{diag}])"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self._mat, other._mat))

    __hash__ = None  # type: ignore[assignment]

    def element(self, row: str, col: str) -> complex:
        """Matrix element <row|rho|col> addressed by basis labels."""
        return complex(
            self._mat[BASIS_LABELS.index(row), BASIS_LABELS.index(col)]
        )

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self._mat)).copy()

    def purity(self) -> float:
        return float(np.real(np.trace(self._mat @ self._mat)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(hermitian_part(self._mat))

    def trace_distance(self, other: ArrayLike) -> float:
        """Half the trace norm of the difference."""
        diff = hermitian_part(self._mat - as_matrix(other))
        return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))

    def conjugated(self, unitary: np.ndarray) -> "DensityMatrix":
        """Return U rho U^dagger."""
        return DensityMatrix(unitary @ self._mat @ dagger(unitary), validate=False)

    def to_dict(self) -> dict:
        """JSON-friendly {"re": 4x4, "im": 4x4}."""
        return {
            "re": np.real(self._mat).tolist(),
            "im": np.imag(self._mat).tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityMatrix":
        try:
            mat = np.asarray(data["re"], dtype=float) + 1j * np.asarray(
                data.get("im", np.zeros((4, 4))), dtype=float
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpecError(f"malformed density matrix: {exc}") from exc
        return cls(mat)


def as_matrix(rho: ArrayLike) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


def dm_from_pure(v: Sequence[complex]) -> DensityMatrix:
    """
    Build |v><v| / <v|v> from a (possibly unnormalized) 4-vector.

    Raises:
        InvalidSpecError: If `v` is not a finite, nonzero 4-vector.
    """
    ket = np.asarray(v, dtype=complex).reshape(-1)
    if ket.shape != (4,):
        raise InvalidSpecError(f"expected a 4-vector, got shape {ket.shape}")
    if not np.all(np.isfinite(ket)):
        raise InvalidSpecError("state vector has non-finite amplitudes")
    norm = np.linalg.norm(ket)
    if norm == 0:
        raise InvalidSpecError("cannot normalize the zero vector")
    ket = ket / norm
    return DensityMatrix(np.outer(ket, ket.conj()))


def ground_state() -> DensityMatrix:
    return dm_from_pure(basis_state("00"))


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(I4 / 4)


def random_density_matrix(
    rng: np.random.Generator, rank: int = 4
) -> DensityMatrix:
    """Random state from a Ginibre matrix G G^dagger / tr."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    mat = g @ dagger(g)
    return DensityMatrix(mat / np.trace(mat))


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random U1 kron U2."""
    u1 = unitary_group.rvs(2, random_state=rng)
    u2 = unitary_group.rvs(2, random_state=rng)
    return np.kron(u1, u2)
