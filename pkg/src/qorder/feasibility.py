"""
Decide whether a requested map on pure states extends to a unitary.

A unitary preserves every overlap, so a list of ``input -> output`` pairs is
realizable iff the two Gram matrices agree. The comparator and sorter checks
are that criterion specialized to the compare and sort machines, and they
report the offending pairs/triples as certificates.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import QOrderError
from .linalg import NORM_TOL, StateVector, gram_matrix
from .ordering import OrderedStateSet, SetClass, classify_set

DEFAULT_TOL = 1e-9


class Verdict(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    NECESSARY_TESTS_PASSED = "NecessaryTestsPassed"


@dataclass(frozen=True)
class Violation:
    """One witness of infeasibility.

    ``indices`` is a 1-based pair ``(i, j)`` or, for sorter checks, a triple
    ``(i, j, q)``. ``residual == abs(lhs - rhs)``.
    """

    indices: tuple[int, ...]
    lhs: complex
    rhs: complex
    residual: float

    @property
    def i(self) -> int:
        return self.indices[0]

    @property
    def j(self) -> int:
        return self.indices[1]

    @property
    def q(self) -> int | None:
        return self.indices[2] if len(self.indices) > 2 else None


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: Verdict
    violations: tuple[Violation, ...]
    max_residual: float
    tol: float
    check: str = ""

    @property
    def feasible(self) -> bool:
        return self.verdict is Verdict.FEASIBLE


@dataclass(frozen=True, eq=False)
class PartialIsometrySpec:
    """Requested map given on finitely many inputs.

    Unequal input/output dimensions must be padded with an ancilla factor
    before building the spec.
    """

    pairs: tuple[tuple[StateVector, StateVector], ...] = field(default_factory=tuple)

    def __post_init__(self):
        pairs = tuple((a, b) for a, b in self.pairs)
        if not pairs:
            raise QOrderError("bad-spec", "a spec needs at least one pair")
        in_dims = {a.dim for a, _ in pairs}
        out_dims = {b.dim for _, b in pairs}
        if len(in_dims) != 1 or len(out_dims) != 1:
            raise QOrderError("bad-spec", "inputs (and outputs) must share one dimension")
        if in_dims != out_dims:
            raise QOrderError(
                "bad-spec",
                f"in_dim {in_dims.pop()} != out_dim {out_dims.pop()}; pad with an ancilla",
            )
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_lists(cls, inputs: Sequence[StateVector], outputs: Sequence[StateVector]):
        if len(inputs) != len(outputs):
            raise QOrderError("bad-spec", "inputs and outputs differ in length")
        return cls(tuple(zip(inputs, outputs)))

    @property
    def inputs(self) -> list[StateVector]:
        return [a for a, _ in self.pairs]

    @property
    def outputs(self) -> list[StateVector]:
        return [b for _, b in self.pairs]

    @property
    def in_dim(self) -> int:
        return self.pairs[0][0].dim

    @property
    def out_dim(self) -> int:
        return self.pairs[0][1].dim


def _report(check: str, violations: list[Violation], max_residual: float, tol: float,
            ok: Verdict = Verdict.FEASIBLE) -> FeasibilityReport:
    verdict = Verdict.INFEASIBLE if violations else ok
    return FeasibilityReport(verdict, tuple(violations), float(max_residual), tol, check)


def unitary_extension_feasible(spec: PartialIsometrySpec, tol: float = DEFAULT_TOL) -> FeasibilityReport:
    """Compare input and output overlaps over every pair ``i < j``."""
    if not isinstance(spec, PartialIsometrySpec):
        raise QOrderError("bad-spec", f"expected PartialIsometrySpec, got {type(spec).__name__}")
    g_in = gram_matrix(spec.inputs).entries
    g_out = gram_matrix(spec.outputs).entries
    violations = []
    max_residual = 0.0
    for i, j in itertools.combinations(range(len(spec.pairs)), 2):
        lhs, rhs = complex(g_in[i, j]), complex(g_out[i, j])
        residual = abs(lhs - rhs)
        max_residual = max(max_residual, residual)
        if residual > tol:
            violations.append(Violation((i + 1, j + 1), lhs, rhs, residual))
    return _report("spec", violations, max_residual, tol)


def comparator_feasible(states: OrderedStateSet, tol: float = DEFAULT_TOL) -> FeasibilityReport:
    """Every distinct pair must be orthogonal.

    Unitarity forces ``<psi_j|psi_i><psi_i|psi_j> = 0``; that product is
    evaluated as ``|<psi_i|psi_j>|**2``.
    """
    if len(states) < 2:
        raise QOrderError("too-few-states", "comparator check needs N >= 2")
    gram = gram_matrix(states).entries
    violations = []
    max_residual = 0.0
    for i, j in itertools.combinations(range(len(states)), 2):
        lhs = abs(gram[i, j]) ** 2
        max_residual = max(max_residual, lhs)
        if lhs > tol:
            violations.append(Violation((i + 1, j + 1), complex(lhs), 0j, lhs))
    return _report("comparator", violations, max_residual, tol)


def sorter_feasible(states: OrderedStateSet, tol: float = DEFAULT_TOL) -> FeasibilityReport:
    """Necessary condition for a unitary sorter, tested on every triple.

    For ``i < j < q`` sorting forces
    ``<psi_q|psi_i> = <psi_j|psi_i><psi_q|psi_j><S''|S'>`` with unknown
    ancilla states of overlap modulus at most 1, so a realizable set needs
    ``|<psi_q|psi_i>| <= |<psi_j|psi_i>| |<psi_q|psi_j>| + tol``.

    Passing every triple only proves feasibility for orthogonal sets; any
    other passing set gets ``NecessaryTestsPassed``.
    """
    if len(states) < 3:
        raise QOrderError("too-few-states", "sorter check needs N >= 3")
    moduli = np.abs(gram_matrix(states).entries)
    violations = []
    max_residual = 0.0
    for i, j, q in itertools.combinations(range(len(states)), 3):
        lhs = float(moduli[q, i])
        rhs = float(moduli[j, i] * moduli[q, j])
        max_residual = max(max_residual, lhs - rhs)
        if lhs > rhs + tol:
            violations.append(Violation((i + 1, j + 1, q + 1), complex(lhs), complex(rhs), lhs - rhs))
    if classify_set(states, NORM_TOL) is SetClass.MUTUALLY_ORTHOGONAL:
        fallback = Verdict.FEASIBLE
    else:
        fallback = Verdict.NECESSARY_TESTS_PASSED
    return _report("sorter", violations, max_residual, tol, ok=fallback)
