"""
Dense state-vector simulation of comparator and sorter circuits.

Local gates are applied by contracting the matching tensor axes, never by
building ``I (x) U (x) I`` explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import NamedTuple, Sequence

import numpy as np

from .errors import QOrderError
from .linalg import StateVector, UnitaryMatrix, tensor
from .ordering import OrderedStateSet, is_orthogonal_set
from .synthesis import FLAG_DIM, ComparatorCircuit, SorterCircuit

DECODE_THRESHOLD = 1 - 1e-6
MAX_NETWORK_DIM = 4096


@dataclass(frozen=True, eq=False)
class CompositeState:
    vector: StateVector
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise QOrderError("bad-factor", f"invalid factor dims {dims}")
        if prod(dims) != self.vector.dim:
            raise QOrderError("dim-mismatch", f"factors {dims} do not multiply to {self.vector.dim}")
        object.__setattr__(self, "factor_dims", dims)

    @classmethod
    def product(cls, *factors: StateVector) -> CompositeState:
        vector = factors[0] if len(factors) == 1 else tensor(*factors)
        return cls(vector, tuple(f.dim for f in factors))

    @property
    def dim(self) -> int:
        return self.vector.dim

    def tensor_view(self) -> np.ndarray:
        return self.vector.amplitudes.reshape(self.factor_dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector.amplitudes))


def _check_factor(s: CompositeState, factor_index: int) -> None:
    if not 0 <= factor_index < len(s.factor_dims):
        raise QOrderError("bad-factor", f"factor {factor_index} outside 0..{len(s.factor_dims) - 1}")


def contract_local(array: np.ndarray, op: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply ``op`` to the tensor axes ``axes`` of ``array``.

    ``op`` acts on the product of those axes in the given order. Extra axes
    (including trailing batch axes) are untouched.
    """
    axes = list(axes)
    dims = [array.shape[a] for a in axes]
    k = len(axes)
    op_t = np.asarray(op).reshape(dims + dims)
    out = np.tensordot(op_t, array, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply(u: UnitaryMatrix | np.ndarray, s: CompositeState) -> CompositeState:
    matrix = np.asarray(u)
    if matrix.shape != (s.dim, s.dim):
        raise QOrderError("dim-mismatch", f"operator {matrix.shape} on state of dim {s.dim}")
    return CompositeState(StateVector(matrix @ s.vector.amplitudes), s.factor_dims)


def apply_local(u: UnitaryMatrix | np.ndarray, s: CompositeState, factors: Sequence[int]) -> CompositeState:
    """Apply ``u`` to the listed factors of ``s`` (leftmost factor of ``u`` first)."""
    for f in factors:
        _check_factor(s, f)
    if len(set(factors)) != len(factors):
        raise QOrderError("bad-factor", f"repeated factor in {list(factors)}")
    local = prod(s.factor_dims[f] for f in factors)
    matrix = np.asarray(u)
    if matrix.shape != (local, local):
        raise QOrderError("dim-mismatch", f"operator {matrix.shape} on factors of total dim {local}")
    out = contract_local(s.tensor_view(), matrix, factors)
    return CompositeState(StateVector(out.reshape(-1)), s.factor_dims)


def flag_distribution(s: CompositeState, factor_index: int) -> list[float]:
    """Exact outcome probabilities of a computational-basis readout of one factor."""
    _check_factor(s, factor_index)
    probs = np.abs(s.tensor_view()) ** 2
    other = tuple(a for a in range(len(s.factor_dims)) if a != factor_index)
    return [float(p) for p in probs.sum(axis=other)]


def reduced_density(s: CompositeState, factor_index: int) -> np.ndarray:
    """Reduced density matrix of one factor."""
    _check_factor(s, factor_index)
    dims = s.factor_dims
    left = prod(dims[:factor_index])
    view = s.vector.amplitudes.reshape(left, dims[factor_index], -1)
    rho = np.zeros((dims[factor_index],) * 2, dtype=np.complex128)
    for block in view:
        rho += block @ block.conj().T
    return rho


def overlap_probability(s: CompositeState, factor_index: int, target: StateVector) -> float:
    """``<target| rho_factor |target>`` for the reduced state of one factor."""
    _check_factor(s, factor_index)
    if s.factor_dims[factor_index] != target.dim:
        raise QOrderError("dim-mismatch", "target dim differs from factor dim")
    rho = reduced_density(s, factor_index)
    return float(np.vdot(target.amplitudes, rho @ target.amplitudes).real)


def _decode_rho(rho: np.ndarray, states: OrderedStateSet) -> int | None:
    for k in range(1, len(states) + 1):
        psi = states[k].amplitudes
        if np.vdot(psi, rho @ psi).real > DECODE_THRESHOLD:
            return k
    return None


def decode_register(s: CompositeState, factor_index: int, states: OrderedStateSet) -> int | None:
    """1-based index of the alphabet state held by a factor, or ``None``."""
    if not is_orthogonal_set(states):
        raise QOrderError("not-orthogonal", "decoding needs an orthogonal alphabet")
    _check_factor(s, factor_index)
    if s.factor_dims[factor_index] != states.dim:
        raise QOrderError("dim-mismatch", "factor dim differs from alphabet dim")
    return _decode_rho(reduced_density(s, factor_index), states)


def _bit(probs: Sequence[float], label: str) -> int:
    for bit, p in enumerate(probs):
        if p > DECODE_THRESHOLD:
            return bit
    raise QOrderError("decode-failed", f"{label} is not in a basis state: {list(probs)}")


def _read_bit(s: CompositeState, factor_index: int) -> int:
    return _bit(flag_distribution(s, factor_index), f"flag {factor_index}")


def trailing_marginals(s: CompositeState, first: int) -> list[list[float]]:
    """``flag_distribution`` for every factor from ``first`` on, in one pass."""
    dims = s.factor_dims
    probs = np.abs(s.vector.amplitudes.reshape(prod(dims[:first]), -1)) ** 2
    tail = probs.sum(axis=0).reshape(dims[first:])
    out = []
    for axis in range(tail.ndim):
        other = tuple(a for a in range(tail.ndim) if a != axis)
        out.append([float(p) for p in tail.sum(axis=other)])
    return out


def _check_inputs(states: OrderedStateSet, indices: Sequence[int], expected: int) -> list[int]:
    indices = [int(k) for k in indices]
    if len(indices) != expected:
        raise QOrderError("bad-input", f"expected {expected} indices, got {len(indices)}")
    for k in indices:
        states._check_index(k)
    return indices


def prepare_comparator_input(circuit: ComparatorCircuit, i: int, j: int) -> CompositeState:
    i, j = _check_inputs(circuit.states, [i, j], 2)
    flag = StateVector.basis(circuit.flag_dim, 0)
    return CompositeState.product(flag, circuit.states[i], circuit.states[j])


class CompareRun(NamedTuple):
    flag: int
    registers: tuple[int, int]


def decode_compare(circuit: ComparatorCircuit, final: CompositeState) -> CompareRun:
    regs = tuple(decode_register(final, f, circuit.states) for f in (1, 2))
    if None in regs:
        raise QOrderError("decode-failed", f"registers decoded to {regs}")
    return CompareRun(_read_bit(final, 0), regs)


def run_compare(circuit: ComparatorCircuit, i: int, j: int) -> CompareRun:
    """Run the comparator on ``|0>|psi_i>|psi_j>`` and decode everything."""
    return decode_compare(circuit, simulate_compare(circuit, i, j))


def simulate_compare(circuit: ComparatorCircuit, i: int, j: int) -> CompositeState:
    return apply(circuit.unitary, prepare_comparator_input(circuit, i, j))


def simulate_sort(circuit: SorterCircuit, input_indices: Sequence[int]) -> CompositeState:
    """Full output state of the network, flags appended after the registers.

    Each stage's flag starts in ``|0>`` and nothing touches it before that
    stage, so it is tensored in right when its stage runs; the result equals
    preparing all flags up front.
    """
    states = circuit.states
    indices = _check_inputs(states, input_indices, circuit.n_registers)
    d, n = states.dim, circuit.n_registers

    amps = states[indices[0]].amplitudes
    for k in indices[1:]:
        amps = np.kron(amps, states[k].amplitudes)

    for stage in circuit.stages:
        # registers p, p+1 are adjacent axes: view the state as (left, d*d, right)
        # and apply the fresh-flag columns of the gate, one flag value at a time
        u = stage.unitary.entries.reshape(FLAG_DIM, d * d, FLAG_DIM, d * d)
        left = d ** (stage.position - 1)
        view = amps.reshape(left, d * d, -1)
        amps = np.stack([u[f, :, 0, :] @ view for f in range(FLAG_DIM)], axis=-1)

    return CompositeState(StateVector.adopt(amps), circuit.factor_dims)


class SortRun(NamedTuple):
    output: tuple[int, ...]
    flags: tuple[int, ...]


def decode_sort(circuit: SorterCircuit, final: CompositeState) -> SortRun:
    n = circuit.n_registers
    decoded = tuple(decode_register(final, p, circuit.states) for p in range(n))
    if None in decoded:
        raise QOrderError("decode-failed", f"registers decoded to {decoded}")
    marginals = trailing_marginals(final, n)
    flags = tuple(_bit(m, f"flag {n + s}") for s, m in enumerate(marginals))
    return SortRun(decoded, flags)


def run_sort(circuit: SorterCircuit, input_indices: Sequence[int]) -> SortRun:
    """Sort basis-alphabet inputs; returns decoded registers and flag bits."""
    return decode_sort(circuit, simulate_sort(circuit, input_indices))


def network_matrix(circuit: SorterCircuit) -> np.ndarray:
    """Dense matrix of the whole network on registers (x) flags.

    Only for small networks (total dimension up to 4096).
    """
    dims = circuit.factor_dims
    total = prod(dims)
    if total > MAX_NETWORK_DIM:
        raise QOrderError("too-large", f"network dimension {total} exceeds {MAX_NETWORK_DIM}")
    n = circuit.n_registers
    columns = np.eye(total, dtype=np.complex128).reshape(dims + (total,))
    for s, stage in enumerate(circuit.stages):
        p = stage.position - 1
        columns = contract_local(columns, stage.unitary.entries, [n + s, p, p + 1])
    return columns.reshape(total, total)
