"""
Complex linear algebra on pure states.

Everything here works on immutable values: a :class:`StateVector` or
:class:`UnitaryMatrix` is validated once at construction and its backing
array is made read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import QOrderError

NORM_TOL = 1e-9
UNITARY_TOL = 1e-9
HERMITIAN_TOL = 1e-12
COMPLETION_DROP = 1e-6


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


def _check_norm(amps: np.ndarray) -> None:
    if amps.size < 1:
        raise QOrderError("bad-dim", "a state needs at least one amplitude")
    norm = np.sqrt(np.vdot(amps, amps).real)
    if not abs(norm - 1.0) <= NORM_TOL:
        raise QOrderError("not-normalized", f"norm {norm!r} differs from 1")


@dataclass(frozen=True, eq=False)
class StateVector:
    """A unit-norm vector of complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        _check_norm(amps)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def adopt(cls, amplitudes: np.ndarray) -> StateVector:
        """Wrap a freshly computed complex128 array without copying it.

        The caller must not keep a writable reference to ``amplitudes``.
        """
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128).reshape(-1)
        _check_norm(amps)
        amps.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "amplitudes", amps)
        return obj

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis(cls, dim: int, index: int) -> StateVector:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex] | np.ndarray) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise QOrderError("not-normalized", "zero vector cannot be normalized")
        return cls(amps / norm)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.amplitudes
        return self.amplitudes.astype(dtype)

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """A square complex matrix with ``max|U^H U - I| <= 1e-9``."""

    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise QOrderError("not-unitary", f"shape {entries.shape} is not square")
        if not is_unitary(entries, UNITARY_TOL):
            raise QOrderError("not-unitary", f"deviation {unitarity_error(entries):.3e}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def adjoint(self) -> UnitaryMatrix:
        return UnitaryMatrix(self.entries.conj().T)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Pairwise overlaps ``entries[i, j] = <psi_i|psi_j>``."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def check(self) -> None:
        """Raise if any of Hermitian / unit-diagonal / PSD fails."""
        if self.hermiticity_error() > HERMITIAN_TOL:
            raise QOrderError("bad-gram", "not Hermitian")
        if np.max(np.abs(np.diag(self.entries) - 1.0)) > NORM_TOL:
            raise QOrderError("bad-gram", "diagonal is not 1")
        if self.eigenvalues().min() < -NORM_TOL:
            raise QOrderError("bad-gram", "not positive semidefinite")


def _as_array(state: StateVector | np.ndarray) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=np.complex128)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return ``<a|b>``, conjugate-linear in ``a``."""
    if a.dim != b.dim:
        raise QOrderError("dim-mismatch", f"{a.dim} != {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def tensor(a: StateVector, b: StateVector, *rest: StateVector) -> StateVector:
    """Kronecker product, first factor outermost."""
    amps = np.kron(a.amplitudes, b.amplitudes)
    for c in rest:
        amps = np.kron(amps, c.amplitudes)
    return StateVector(amps)


def gram_matrix(states: Iterable[StateVector]) -> GramMatrix:
    members = list(states)
    if not members:
        raise QOrderError("empty-set", "gram matrix of an empty set")
    dims = {s.dim for s in members}
    if len(dims) != 1:
        raise QOrderError("dim-mismatch", f"members have dims {sorted(dims)}")
    columns = np.stack([s.amplitudes for s in members], axis=1)
    return GramMatrix(columns.conj().T @ columns)


def unitarity_error(matrix: np.ndarray) -> float:
    matrix = np.asarray(matrix)
    eye = np.eye(matrix.shape[0])
    return float(np.max(np.abs(matrix.conj().T @ matrix - eye)))


def is_unitary(matrix: np.ndarray | UnitaryMatrix, tol: float = UNITARY_TOL) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise QOrderError("not-square", f"shape {matrix.shape}")
    return unitarity_error(matrix) <= tol


def _orthonormal_columns(columns: Sequence[StateVector | np.ndarray], dim: int) -> np.ndarray:
    if not columns:
        return np.zeros((dim, 0), dtype=np.complex128)
    arrays = [_as_array(c) for c in columns]
    if any(a.size != dim for a in arrays):
        raise QOrderError("dim-mismatch", f"columns must have dimension {dim}")
    return np.stack(arrays, axis=1)


def complete_to_unitary(columns: Sequence[StateVector | np.ndarray], dim: int) -> UnitaryMatrix:
    """Extend orthonormal ``columns`` to a ``dim x dim`` unitary.

    The first ``len(columns)`` columns are the inputs verbatim. The rest come
    from the canonical basis vectors e_0, e_1, ... taken in index order and
    Gram-Schmidt orthogonalized against everything accepted so far;
    candidates whose residual norm falls below 1e-6 are dropped. The result
    is fully deterministic.
    """
    basis = _orthonormal_columns(columns, dim)
    k = basis.shape[1]
    if k > dim:
        raise QOrderError("not-isometry", f"{k} columns do not fit in dimension {dim}")
    if k and np.max(np.abs(basis.conj().T @ basis - np.eye(k))) > NORM_TOL:
        raise QOrderError("not-isometry", "input columns are not orthonormal")

    accepted = [basis[:, c] for c in range(k)]
    for b in range(dim):
        if len(accepted) == dim:
            break
        candidate = np.zeros(dim, dtype=np.complex128)
        candidate[b] = 1.0
        if accepted:
            q = np.stack(accepted, axis=1)
            # classical Gram-Schmidt twice is as stable as modified GS
            candidate = candidate - q @ (q.conj().T @ candidate)
            candidate = candidate - q @ (q.conj().T @ candidate)
        norm = np.linalg.norm(candidate)
        if norm < COMPLETION_DROP:
            continue
        accepted.append(candidate / norm)

    if len(accepted) != dim:
        raise QOrderError("not-isometry", "completion did not reach full rank")
    return UnitaryMatrix(np.stack(accepted, axis=1))


def isometry_unitary(
    inputs: Sequence[StateVector | np.ndarray],
    outputs: Sequence[StateVector | np.ndarray],
    dim: int,
) -> UnitaryMatrix:
    """Unitary sending ``inputs[k]`` to ``outputs[k]`` for every k.

    Both lists must be orthonormal families of equal length. Each side is
    completed with :func:`complete_to_unitary` and the completions are
    paired off in order, so the result is deterministic.
    """
    if len(inputs) != len(outputs):
        raise QOrderError("not-isometry", "inputs and outputs differ in length")
    source = complete_to_unitary(inputs, dim).entries
    target = complete_to_unitary(outputs, dim).entries
    return UnitaryMatrix(target @ source.conj().T)
