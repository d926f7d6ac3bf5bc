import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qorder.errors import QOrderError
from qorder.linalg import (
    StateVector,
    UnitaryMatrix,
    complete_to_unitary,
    gram_matrix,
    inner_product,
    is_unitary,
    isometry_unitary,
    tensor,
    unitarity_error,
)

from . import oracles

SQ = 1 / math.sqrt(2)
ZERO = StateVector.basis(2, 0)
ONE = StateVector.basis(2, 1)
PLUS = StateVector([SQ, SQ])
MINUS = StateVector([SQ, -SQ])

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_state_vector_rejects_unnormalized():
    with pytest.raises(QOrderError) as err:
        StateVector([1.0, 1.0])
    assert err.value.code == "not-normalized"


def test_state_vector_is_immutable():
    amps = np.array([1.0, 0.0])
    s = StateVector(amps)
    amps[0] = 5.0
    assert s.amplitudes[0] == 1.0
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0.0


def test_inner_product_examples():
    assert inner_product(ZERO, ONE) == 0
    assert inner_product(ZERO, ZERO) == 1
    expected = oracles.dot([1, 0], [SQ, SQ])
    assert expected == pytest.approx(0.70710678, abs=1e-8)
    assert inner_product(ZERO, PLUS) == pytest.approx(expected, abs=1e-15)


def test_inner_product_dim_mismatch():
    with pytest.raises(QOrderError) as err:
        inner_product(ZERO, StateVector.basis(3, 0))
    assert err.value.code == "dim-mismatch"


def test_inner_product_is_conjugate_linear_in_first_argument():
    a = StateVector([SQ, 1j * SQ])
    b = StateVector([0, 1])
    assert inner_product(a, b) == pytest.approx(-1j * SQ)
    assert inner_product(b, a) == pytest.approx(1j * SQ)


@given(seeds, st.integers(1, 8))
def test_inner_product_matches_loop_oracle(seed, d):
    rng = np.random.default_rng(seed)
    a, b = oracles.random_state(d, rng), oracles.random_state(d, rng)
    got = inner_product(StateVector(a), StateVector(b))
    assert got == pytest.approx(oracles.dot(a, b), abs=1e-12)
    assert got == pytest.approx(inner_product(StateVector(b), StateVector(a)).conjugate(), abs=1e-15)


@given(seeds, st.integers(1, 16))
def test_self_overlap_is_real_unit(seed, d):
    a = StateVector(oracles.random_state(d, np.random.default_rng(seed)))
    z = inner_product(a, a)
    assert z.imag == 0 or abs(z.imag) < 1e-15
    assert abs(z.real - 1) <= 1e-9


def test_tensor_basis_and_dims():
    prod = tensor(ZERO, ONE)
    assert prod.dim == 4
    np.testing.assert_array_equal(prod.amplitudes, [0, 1, 0, 0])
    assert tensor(PLUS, StateVector.basis(3, 2)).dim == 6
    assert np.linalg.norm(tensor(PLUS, MINUS).amplitudes) == pytest.approx(1.0, abs=1e-15)


def test_tensor_is_row_major():
    a = StateVector.basis(3, 2)
    b = StateVector.basis(4, 1)
    assert np.flatnonzero(tensor(a, b).amplitudes).tolist() == [2 * 4 + 1]


@given(seeds, st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_tensor_associative(seed, da, db, dc):
    rng = np.random.default_rng(seed)
    a, b, c = (StateVector(oracles.random_state(d, rng)) for d in (da, db, dc))
    left = tensor(tensor(a, b), c).amplitudes
    right = tensor(a, tensor(b, c)).amplitudes
    assert np.max(np.abs(left - right)) <= 1e-12


def test_gram_matrix_examples():
    np.testing.assert_allclose(gram_matrix([ZERO, ONE]).entries, np.eye(2))
    expected = np.array([[oracles.dot(x, y) for y in ([1, 0], [SQ, SQ])] for x in ([1, 0], [SQ, SQ])])
    np.testing.assert_allclose(expected, [[1, 0.70710678], [0.70710678, 1]], atol=1e-8)
    np.testing.assert_allclose(gram_matrix([ZERO, PLUS]).entries, expected, atol=1e-15)


def test_gram_matrix_empty():
    with pytest.raises(QOrderError) as err:
        gram_matrix([])
    assert err.value.code == "empty-set"


@given(seeds, st.integers(1, 8), st.integers(1, 10))
def test_gram_matrix_invariants(seed, d, n):
    rng = np.random.default_rng(seed)
    g = gram_matrix([StateVector(oracles.random_state(d, rng)) for _ in range(n)])
    assert g.hermiticity_error() <= 1e-12
    assert np.max(np.abs(np.diag(g.entries) - 1)) <= 1e-9
    assert g.eigenvalues().min() >= -1e-9
    g.check()


def test_complete_empty_is_identity():
    np.testing.assert_array_equal(complete_to_unitary([], 2).entries, np.eye(2))


def test_complete_from_one():
    # e0 survives orthogonalization against |1>, e1 is dropped
    u = complete_to_unitary([ONE], 2).entries
    np.testing.assert_allclose(u, [[0, 1], [1, 0]], atol=1e-15)


def test_complete_from_plus():
    # e0 - <+|e0>|+> = (1/2, -1/2), normalized to |->
    u = complete_to_unitary([PLUS], 2).entries
    np.testing.assert_allclose(u[:, 0], PLUS.amplitudes, atol=1e-15)
    np.testing.assert_allclose(u[:, 1], MINUS.amplitudes, atol=1e-15)


def test_complete_rejects_non_orthonormal():
    with pytest.raises(QOrderError) as err:
        complete_to_unitary([ZERO, PLUS], 2)
    assert err.value.code == "not-isometry"
    with pytest.raises(QOrderError):
        complete_to_unitary([ZERO, ONE, ZERO], 2)


def test_complete_is_deterministic():
    cols = [PLUS]
    a = complete_to_unitary(cols, 2).entries
    b = complete_to_unitary(cols, 2).entries
    assert a.tobytes() == b.tobytes()


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 16), st.data())
def test_complete_random_orthonormal(seed, dim, data):
    k = data.draw(st.integers(0, dim))
    rng = np.random.default_rng(seed)
    cols = oracles.random_orthonormal(dim, k, rng)
    u = complete_to_unitary([StateVector(c) for c in cols], dim).entries
    assert is_unitary(u, 1e-9)
    for c in range(k):
        assert np.max(np.abs(u[:, c] - cols[c])) <= 1e-9


def test_is_unitary_examples():
    assert is_unitary(np.eye(3), 1e-9)
    assert not is_unitary(2 * np.eye(3), 1e-9)
    rng = np.random.default_rng(7)
    assert is_unitary(oracles.givens_product(5, 10, rng), 1e-9)


def test_unitary_matrix_validates():
    with pytest.raises(QOrderError):
        UnitaryMatrix(2 * np.eye(2))
    u = UnitaryMatrix(oracles.givens_product(4, 10, np.random.default_rng(1)))
    assert unitarity_error(u.adjoint.entries @ u.entries) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 8), st.data())
def test_isometry_unitary_maps_columns(seed, dim, data):
    k = data.draw(st.integers(0, dim))
    rng = np.random.default_rng(seed)
    ins = oracles.random_orthonormal(dim, k, rng)
    outs = oracles.random_orthonormal(dim, k, rng)
    u = isometry_unitary(ins, outs, dim).entries
    for a, b in zip(ins, outs):
        assert np.max(np.abs(u @ a - b)) < 1e-9
