"""Tests for Friedgut junta extraction and sign rounding."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qboolean.exceptions import NotQuantumBooleanError, ValidationError
from qboolean.models import DenseOperator, FourierOperator
from qboolean.services.ensembles import classical_embed, random_hermitian, random_qbf, tribes
from qboolean.services.influence import profile
from qboolean.services.junta import (
    boolean_junta,
    check_partial_average_lemma,
    friedgut_extract,
    junta_bound,
    sign_round,
)
from qboolean.services.pauli_core import is_quantum_boolean, pauli_matrix, schatten_norm, support_of, to_dense


def test_junta_bound_examples():
    assert junta_bound(1.0, 1.0, 2.0) == pytest.approx(1.0)
    assert junta_bound(0.0, 0.0, 1.0) == 0.0
    assert junta_bound(2.0, 1.0, 1.0) == pytest.approx(4 * 2.0 ** 48)


def test_junta_bound_overflows_to_infinity():
    assert junta_bound(5.0, 10.0, 0.01) == math.inf


def test_junta_bound_boolean_constants_are_larger():
    assert junta_bound(1.0, 1.0, 1.0, boolean=True) > junta_bound(1.0, 1.0, 1.0)


def test_junta_bound_rejects_bad_eps():
    with pytest.raises(ValidationError):
        junta_bound(1.0, 1.0, 0.0)
    with pytest.raises(ValidationError):
        junta_bound(1.0, 1.0, 2.5)


@pytest.mark.parametrize('eps', [2.0, 0.5])
def test_dictator_keeps_its_qubit(dictator3, eps):
    result = friedgut_extract(dictator3, eps)
    assert result.discarded == frozenset({1, 2})
    assert result.kept == frozenset({0})
    assert result.error_l2 == pytest.approx(0.0, abs=1e-12)
    assert result.k_actual == 1
    assert result.certified


def test_identity_uses_trivial_branch():
    result = friedgut_extract(FourierOperator.identity(3), 1.0)
    assert result.k_actual == 0
    assert result.error_l2 == 0.0
    assert result.certified


def test_small_operator_is_rescaled():
    F = FourierOperator.from_coefficients(2, {'30': 0.1, '03': 0.01})
    result = friedgut_extract(F, 0.5)
    assert result.error_l2 <= 0.5
    assert result.certified


def test_extraction_is_certified_on_random_operators(rng):
    for n in (2, 3, 4):
        for eps in (0.25, 1.0):
            result = friedgut_extract(random_qbf(n, 2 ** (n - 1), rng), eps)
            assert result.certified
            assert support_of(result.junta) <= result.kept


def test_extraction_error_is_recomputed(rng):
    A = random_hermitian(3, rng)
    result = friedgut_extract(A, 1.0)
    assert result.error_l2 == pytest.approx(schatten_norm(A - to_dense(result.junta), 2).value, abs=1e-10)
    assert result.junta.norm_l2() <= schatten_norm(A, 2).value + 1e-12


def test_partial_average_lemma(rng):
    A = random_qbf(3, 4, rng)
    inf1 = profile(A).inf1
    for t in (0.1, 0.5):
        report = check_partial_average_lemma(A, t, float(np.median(inf1)))
        assert report.satisfied


def test_partial_average_lemma_rejects_bad_time(sigma_z):
    with pytest.raises(ValidationError):
        check_partial_average_lemma(sigma_z, 0.0, 0.1)


def test_sign_round_examples():
    half = DenseOperator(1, 0.5 * np.diag([1.0, -1.0]))
    np.testing.assert_allclose(sign_round(half).matrix, np.diag([1.0, -1.0]), atol=1e-12)
    zero = DenseOperator(1, np.zeros((2, 2)))
    np.testing.assert_allclose(sign_round(zero).matrix, -np.eye(2), atol=1e-12)


def test_sign_round_keeps_eigenvectors(rng):
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    B = DenseOperator(2, q @ np.diag([1.2, -0.3, 0.9, -1.1]) @ q.T)
    rounded = sign_round(B)
    np.testing.assert_allclose(rounded.matrix, q @ np.diag([1.0, -1.0, 1.0, -1.0]) @ q.T, atol=1e-10)
    assert is_quantum_boolean(rounded)
    np.testing.assert_allclose(sign_round(rounded).matrix, rounded.matrix, atol=1e-10)


def test_sign_round_rejects_non_hermitian():
    with pytest.raises(NotQuantumBooleanError):
        sign_round(DenseOperator(1, np.array([[0, 1], [0, 0]])))


def test_boolean_junta_of_one_junta():
    A = pauli_matrix('10')
    result = boolean_junta(A, 0.5)
    np.testing.assert_allclose(result.junta.matrix, A.matrix, atol=1e-10)
    assert result.error_l2 == pytest.approx(0.0, abs=1e-10)
    assert result.certified


def test_boolean_junta_of_tribes():
    result = boolean_junta(classical_embed(tribes(6, 2)), 1.0)
    assert result.error_l2 <= 1.0 + 1e-9
    assert is_quantum_boolean(result.junta)


def test_boolean_junta_of_random_qbf(rng):
    result = boolean_junta(random_qbf(4, 8, rng), 1.5)
    assert result.error_l2 <= 1.5 + 1e-9
    assert result.certified


def test_boolean_junta_requires_quantum_boolean(rng):
    with pytest.raises(NotQuantumBooleanError):
        boolean_junta(random_hermitian(2, rng), 1.0)


def test_junta_result_serializes(dictator3):
    data = friedgut_extract(dictator3, 1.0).to_dict()
    assert data['kept'] == [0]
    assert data['junta']['n'] == 3
