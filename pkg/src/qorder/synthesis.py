"""
Explicit unitaries for comparing and sorting an orthogonal alphabet.

Tensor order is always ``flag (x) register A (x) register B``. Registers are
kept in place as the garbage part of the output, which keeps the requested
columns orthonormal without extra ancilla dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QOrderError
from .linalg import StateVector, UnitaryMatrix, isometry_unitary, tensor
from .ordering import OrderedStateSet, is_orthogonal_set

FLAG_DIM = 2
MIN_REGISTERS = 2
MAX_REGISTERS = 6

_FLAG = (StateVector.basis(2, 0), StateVector.basis(2, 1))


def _require_orthogonal(states: OrderedStateSet) -> None:
    if not is_orthogonal_set(states):
        raise QOrderError(
            "not-orthogonal",
            "the set has a non-orthogonal pair; no unitary comparator exists",
        )


def ascending_flag(a: int, b: int) -> int:
    """Flag bit for inputs ``(a, b)``: 1 when ``a <= b``.

    Equal inputs count as ascending so compare-swap stays stable.
    """
    return 1 if a <= b else 0


@dataclass(frozen=True, eq=False)
class ComparatorCircuit:
    unitary: UnitaryMatrix
    states: OrderedStateSet
    flag_dim: int = FLAG_DIM

    @property
    def dim(self) -> int:
        return self.unitary.dim

    @property
    def factor_dims(self) -> tuple[int, int, int]:
        return (self.flag_dim, self.states.dim, self.states.dim)


@dataclass(frozen=True, eq=False)
class Stage:
    """Compare-swap on registers ``position`` and ``position + 1`` (1-based)."""

    position: int
    unitary: UnitaryMatrix


@dataclass(frozen=True, eq=False)
class SorterCircuit:
    stages: tuple[Stage, ...]
    n_registers: int
    states: OrderedStateSet
    flags_per_stage: int = 1

    @property
    def n_flags(self) -> int:
        return len(self.stages) * self.flags_per_stage

    @property
    def positions(self) -> list[int]:
        return [stage.position for stage in self.stages]

    @property
    def factor_dims(self) -> tuple[int, ...]:
        return (self.states.dim,) * self.n_registers + (FLAG_DIM,) * self.n_flags


def _pair_columns(states: OrderedStateSet, swap: bool):
    """Defining input/output columns over all ordered pairs ``(a, b)``."""
    inputs, outputs = [], []
    n = len(states)
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            flag = ascending_flag(a, b)
            lo, hi = (min(a, b), max(a, b)) if swap else (a, b)
            inputs.append(tensor(_FLAG[0], states[a], states[b]))
            outputs.append(tensor(_FLAG[flag], states[lo], states[hi]))
    return inputs, outputs


def build_comparator(states: OrderedStateSet) -> ComparatorCircuit:
    """Unitary writing the order of two registers into a fresh flag.

    ``|0>|psi_i>|psi_j>`` goes to ``|b>|psi_i>|psi_j>`` with ``b = 1`` iff
    ``i <= j``; every other direction is filled in by deterministic
    completion.
    """
    _require_orthogonal(states)
    inputs, outputs = _pair_columns(states, swap=False)
    dim = FLAG_DIM * states.dim ** 2
    return ComparatorCircuit(isometry_unitary(inputs, outputs, dim), states)


def build_compare_swap(states: OrderedStateSet) -> UnitaryMatrix:
    """Comparator followed by a controlled swap, as one unitary.

    ``|0>|psi_a>|psi_b> -> |f>|psi_min>|psi_max>``. The flag remembers which
    of ``(a, b)`` / ``(b, a)`` came in, so the map stays injective.
    """
    _require_orthogonal(states)
    inputs, outputs = _pair_columns(states, swap=True)
    return isometry_unitary(inputs, outputs, FLAG_DIM * states.dim ** 2)


def transposition_positions(n: int) -> list[int]:
    """Odd-even transposition network on ``n`` wires, flattened.

    ``n`` rounds; even rounds compare (1,2), (3,4), ..., odd rounds (2,3),
    (4,5), .... Each entry is the left wire of a comparison.
    """
    positions = []
    for rnd in range(n):
        start = 1 if rnd % 2 == 0 else 2
        positions.extend(range(start, n, 2))
    return positions


def build_sorter(states: OrderedStateSet, n: int) -> SorterCircuit:
    if not isinstance(n, (int, np.integer)) or not MIN_REGISTERS <= n <= MAX_REGISTERS:
        raise QOrderError("bad-n", f"n must be in {MIN_REGISTERS}..{MAX_REGISTERS}, got {n!r}")
    gate = build_compare_swap(states)
    stages = tuple(Stage(p, gate) for p in transposition_positions(int(n)))
    return SorterCircuit(stages, int(n), states)
