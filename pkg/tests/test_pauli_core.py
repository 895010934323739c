"""Tests for the Pauli-Fourier core."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qboolean.exceptions import DimensionError, ValidationError
from qboolean.models import DenseOperator, FourierOperator, PauliString
from qboolean.services.ensembles import classical_embed, parity, random_hermitian, random_matrix, random_qbf
from qboolean.services.pauli_core import (
    inner,
    is_balanced,
    is_quantum_boolean,
    partial_average,
    pauli_matrix,
    schatten_norm,
    support_of,
    to_dense,
    to_fourier,
    variance,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def test_pauli_matrix_single_letter():
    np.testing.assert_array_equal(pauli_matrix('1').matrix, X)


def test_pauli_matrix_identity_string():
    np.testing.assert_array_equal(pauli_matrix('00').matrix, np.eye(4))


def test_pauli_matrix_is_kronecker_product():
    np.testing.assert_allclose(pauli_matrix('31').matrix, np.kron(Z, X))


def test_pauli_string_index_and_support():
    s = PauliString.from_label('0312')
    assert s.index == int('0312', 4)
    assert PauliString.from_index(s.index, 4) == s
    assert s.support == frozenset({1, 2, 3})
    assert s.weight == 3


def test_pauli_string_rejects_bad_label():
    with pytest.raises(ValidationError):
        PauliString.from_label('0412')


def test_to_fourier_of_projector():
    F = to_fourier(DenseOperator(1, np.diag([1.0, 0.0])))
    assert F.coefficient('0') == pytest.approx(0.5)
    assert F.coefficient('3') == pytest.approx(0.5)
    assert F.coefficient('1') == pytest.approx(0.0)


def test_to_fourier_of_product_has_single_coefficient():
    F = to_fourier(DenseOperator(2, np.kron(X, Y)))
    expected = np.zeros(16, dtype=complex)
    expected[PauliString.from_label('12').index] = 1.0
    np.testing.assert_allclose(F.to_vector(), expected, atol=1e-15)


def test_hermitian_operator_has_real_coefficients(rng):
    F = to_fourier(random_hermitian(4, rng))
    assert np.max(np.abs(F.values.imag)) <= 1e-12


def test_to_fourier_matches_trace_formula(rng):
    A = random_matrix(2, rng)
    F = to_fourier(A)
    for index in range(16):
        s = PauliString.from_index(index, 2)
        direct = np.trace(pauli_matrix(s).matrix @ A.matrix) / 4
        assert F.coefficient(s) == pytest.approx(direct, abs=1e-14)


def test_to_dense_of_identity():
    np.testing.assert_allclose(to_dense(FourierOperator.identity(2)).matrix, np.eye(4))


def test_to_dense_of_projector():
    F = FourierOperator.from_coefficients(1, {'0': 0.5, '3': 0.5})
    np.testing.assert_allclose(to_dense(F).matrix, np.diag([1.0, 0.0]))


def test_round_trip(rng):
    for _ in range(100):
        A = random_matrix(3, rng)
        np.testing.assert_allclose(to_dense(to_fourier(A)).matrix, A.matrix, atol=1e-12)


def test_sparse_storage_above_dense_threshold(rng):
    A = random_hermitian(3, rng)
    dense = to_fourier(A)
    sparse = to_fourier(A, dense_max_qubits=2)
    assert dense.is_dense and not sparse.is_dense
    np.testing.assert_allclose(sparse.to_vector(), dense.to_vector())
    np.testing.assert_allclose(to_dense(sparse).matrix, A.matrix, atol=1e-12)


@pytest.mark.parametrize('p', [1, 1.5, 2, 4, math.inf])
def test_schatten_norm_of_identity(p):
    assert schatten_norm(DenseOperator.identity(3), p).value == pytest.approx(1.0)


def test_schatten_norms_of_quantum_boolean_function(rng):
    A = random_qbf(3, 3, rng)
    assert schatten_norm(A, 1).value == pytest.approx(1.0)
    assert schatten_norm(A, 2).value ** 2 == pytest.approx(1.0)


def test_schatten_norms_of_rank_one_diagonal():
    A = DenseOperator(1, np.diag([2.0, 0.0]))
    assert schatten_norm(A, 1).value == pytest.approx(1.0)
    assert schatten_norm(A, 2).value == pytest.approx(math.sqrt(2))
    assert schatten_norm(A, math.inf).value == pytest.approx(2.0)


def test_schatten_norm_rejects_small_exponent():
    with pytest.raises(ValidationError):
        schatten_norm(DenseOperator.identity(1), 0.5)


def test_inner_products_of_pauli_strings():
    s, u = PauliString.from_label('13'), PauliString.from_label('31')
    assert inner(pauli_matrix(s), pauli_matrix(s)) == pytest.approx(1.0)
    assert inner(pauli_matrix(s), pauli_matrix(u)) == pytest.approx(0.0)


def test_inner_agrees_across_representations(rng):
    A = random_matrix(3, rng)
    F = to_fourier(A)
    assert inner(A, A).real == pytest.approx(schatten_norm(A, 2).value ** 2)
    assert inner(F, F) == pytest.approx(inner(A, A))


def test_inner_rejects_mismatched_sizes():
    with pytest.raises(DimensionError):
        inner(DenseOperator.identity(1), DenseOperator.identity(2))


def test_variance_examples(rng):
    assert variance(FourierOperator.identity(2)) == pytest.approx(0.0)
    assert variance(FourierOperator.from_coefficients(2, {'30': 1.0})) == pytest.approx(1.0)
    assert variance(random_qbf(3, 4, rng)) == pytest.approx(1.0)


def test_is_quantum_boolean():
    assert is_quantum_boolean(pauli_matrix('31'))
    half = FourierOperator.from_coefficients(1, {'3': 0.5})
    check = is_quantum_boolean(half)
    assert not check
    assert check.square_residual == pytest.approx(0.75)


def test_reflection_of_projector_is_quantum_boolean(rng):
    A = random_qbf(3, 5, rng)
    assert is_quantum_boolean(A)
    assert not is_balanced(A)


def test_support_of():
    assert support_of(FourierOperator.from_coefficients(3, {'300': 1.0})) == frozenset({0})
    assert support_of(FourierOperator.identity(3)) == frozenset()
    assert support_of(classical_embed(parity(4))) == frozenset(range(4))


def test_partial_average_examples():
    zz = FourierOperator.from_coefficients(2, {'33': 1.0})
    z1 = FourierOperator.from_coefficients(2, {'30': 1.0})
    assert partial_average(zz, {1}).norm_l2() == pytest.approx(0.0)
    np.testing.assert_allclose(partial_average(z1, {1}).to_vector(), z1.to_vector())


def test_partial_average_over_everything_keeps_trace(rng):
    F = to_fourier(random_hermitian(3, rng))
    averaged = partial_average(F, range(3))
    expected = np.zeros(64, dtype=complex)
    expected[0] = F.coefficient('000')
    np.testing.assert_allclose(averaged.to_vector(), expected)


def test_partial_average_rejects_bad_qubit():
    with pytest.raises(ValidationError):
        partial_average(FourierOperator.identity(2), {2})


def test_operator_serialization_round_trip(rng):
    F = to_fourier(random_matrix(2, rng))
    restored = FourierOperator.from_dict(F.to_dict())
    np.testing.assert_array_equal(restored.to_vector(), F.to_vector())


def test_operator_from_dict_rejects_duplicates():
    data = {'n': 1, 'coeffs': [{'s': '3', 're': 1.0}, {'s': '3', 're': 0.5}]}
    with pytest.raises(ValidationError):
        FourierOperator.from_dict(data)
