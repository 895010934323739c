"""Tests for bit-flip derivations and influences."""

from __future__ import annotations

import numpy as np
import pytest

from qboolean.exceptions import ValidationError
from qboolean.models import FourierOperator
from qboolean.services.ensembles import classical_embed, majority, random_hermitian, random_matrix
from qboolean.services.influence import d_j, influence, profile
from qboolean.services.pauli_core import schatten_norm, to_fourier
from qboolean.services.semigroup import d_j_dense


def test_d_j_keeps_strings_acting_on_the_qubit():
    F = FourierOperator.from_coefficients(2, {'00': 1.0, '30': 2.0, '03': 3.0, '33': 4.0})
    derived = d_j(F, 0)
    assert derived.coefficient('30') == pytest.approx(2.0)
    assert derived.coefficient('33') == pytest.approx(4.0)
    assert derived.coefficient('00') == 0
    assert derived.coefficient('03') == 0


def test_d_j_is_idempotent(rng):
    F = to_fourier(random_matrix(3, rng))
    for j in range(3):
        once = d_j(F, j)
        np.testing.assert_array_equal(d_j(once, j).values, once.values)


def test_d_j_matches_matrix_form(rng):
    A = random_matrix(3, rng)
    for j in range(3):
        np.testing.assert_allclose(
            to_fourier(d_j_dense(A, j)).to_vector(), d_j(A, j).to_vector(), atol=1e-12,
        )


def test_d_j_rejects_bad_qubit(sigma_z):
    with pytest.raises(ValidationError):
        d_j(sigma_z, 1)


def test_dictator_influences(dictator3):
    result = profile(dictator3)
    assert result.inf1 == pytest.approx((1.0, 0.0, 0.0))
    assert result.inf2 == pytest.approx((1.0, 0.0, 0.0))
    assert result.argmax1 == 0


def test_parity_influences(parity4):
    result = profile(parity4)
    assert result.inf1 == pytest.approx((1.0,) * 4)
    assert result.total1 == pytest.approx(4.0)
    assert result.total2 == pytest.approx(4.0)


def test_majority_influences():
    result = profile(classical_embed(majority(3)))
    assert result.inf2 == pytest.approx((0.5, 0.5, 0.5))
    assert result.inf1 == pytest.approx((0.5, 0.5, 0.5))
    assert result.argmax1 == 0


def test_influence_outside_support_is_exactly_zero():
    F = FourierOperator.from_coefficients(3, {'300': 1.0, '100': 0.5})
    result = profile(F)
    assert result.inf1[1] == 0.0
    assert result.inf2[2] == 0.0


def test_l2_influence_matches_dense_norm(rng):
    A = random_hermitian(3, rng)
    for j in range(3):
        assert influence(A, j, 2) == pytest.approx(schatten_norm(d_j_dense(A, j), 2).value ** 2)


def test_total_l2_influence_is_weighted_parseval(rng):
    F = to_fourier(random_hermitian(3, rng))
    expected = float(np.sum(F.weights() * np.abs(F.values) ** 2))
    assert profile(F).total2 == pytest.approx(expected)


def test_profile_serializes(dictator3):
    data = profile(dictator3).to_dict()
    assert set(data) == {'inf1', 'inf2', 'total1', 'total2', 'argmax1'}
