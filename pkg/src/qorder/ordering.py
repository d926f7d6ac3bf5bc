"""Ordered state sets, the basis-label valuation, and set classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import QOrderError
from .linalg import NORM_TOL, StateVector, gram_matrix


class Ordering(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


class SetClass(enum.Enum):
    MUTUALLY_ORTHOGONAL = "MutuallyOrthogonal"
    LINEARLY_INDEPENDENT = "LinearlyIndependent"
    LINEARLY_DEPENDENT = "LinearlyDependent"


@dataclass(frozen=True, eq=False)
class OrderedStateSet:
    """States indexed 1..N; member i precedes member j iff i < j.

    ``labels`` are for display only and never affect the order.
    """

    members: tuple[StateVector, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise QOrderError("empty-set", "an ordered set needs at least one state")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise QOrderError("dim-mismatch", f"members have dims {sorted(dims)}")
        labels = tuple(self.labels) or tuple(f"psi{k}" for k in range(1, len(members) + 1))
        if len(labels) != len(members):
            raise QOrderError("bad-spec", "one label per member is required")
        if len(set(labels)) != len(labels):
            raise QOrderError("bad-spec", "labels must be unique")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, *states: StateVector | Sequence[complex]) -> OrderedStateSet:
        return cls(tuple(s if isinstance(s, StateVector) else StateVector(s) for s in states))

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[StateVector]:
        return iter(self.members)

    def __getitem__(self, index: int) -> StateVector:
        """1-based access, matching the order semantics."""
        self._check_index(index)
        return self.members[index - 1]

    def _check_index(self, index: int) -> None:
        if not 1 <= index <= len(self.members):
            raise QOrderError("bad-index", f"index {index} outside 1..{len(self.members)}")

    def matrix(self) -> np.ndarray:
        """Members as the columns of a ``dim x N`` array."""
        return np.stack([m.amplitudes for m in self.members], axis=1)


@dataclass(frozen=True)
class Valuation:
    basis_values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.basis_values)
        if not values:
            raise QOrderError("bad-valuation", "valuation needs at least one value")
        if any(v < 0 or not np.isfinite(v) for v in values):
            raise QOrderError("bad-valuation", "values must be finite and nonnegative")
        object.__setattr__(self, "basis_values", values)

    @classmethod
    def canonical(cls, dim: int) -> Valuation:
        """Basis label b gets value b."""
        return cls(tuple(float(b) for b in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.basis_values)


def valuation(state: StateVector, val: Valuation | None = None) -> float:
    """Expectation of the basis values in ``state``."""
    if val is None:
        val = Valuation.canonical(state.dim)
    if val.dim != state.dim:
        raise QOrderError("dim-mismatch", f"valuation has {val.dim} values, state dim {state.dim}")
    probs = np.abs(state.amplitudes) ** 2
    return float(np.dot(probs, val.basis_values))


def compare_by_index(states: OrderedStateSet, i: int, j: int) -> Ordering:
    states._check_index(i)
    states._check_index(j)
    if i < j:
        return Ordering.LT
    if i == j:
        return Ordering.EQ
    return Ordering.GT


def classify_set(states: OrderedStateSet | Sequence[StateVector], tol: float = NORM_TOL) -> SetClass:
    members = list(states)
    if not members:
        raise QOrderError("empty-set", "cannot classify an empty set")
    gram = gram_matrix(members).entries
    off = gram - np.diag(np.diag(gram))
    if np.max(np.abs(off), initial=0.0) <= tol:
        return SetClass.MUTUALLY_ORTHOGONAL
    if np.linalg.eigvalsh(gram).min() > tol:
        return SetClass.LINEARLY_INDEPENDENT
    return SetClass.LINEARLY_DEPENDENT


def is_orthogonal_set(states: OrderedStateSet) -> bool:
    return classify_set(states) is SetClass.MUTUALLY_ORTHOGONAL
