"""Tests for the depolarizing semigroup and its lemma checks."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qboolean.exceptions import ValidationError
from qboolean.models import DenseOperator, FourierOperator
from qboolean.services.ensembles import random_hermitian, random_matrix, random_qbf
from qboolean.services.influence import d_j, profile
from qboolean.services.pauli_core import inner, to_dense, to_fourier, variance
from qboolean.services.semigroup import (
    apply_semigroup,
    apply_semigroup_dense,
    carre_du_champ,
    check_djPt_bound,
    check_gradient_domination,
    check_gradient_estimate,
    check_hypercontractivity,
    check_intertwining,
    check_poincare_contraction,
    check_smoothing,
    generator,
    generator_dense,
)

T_GRID = (0.1, 0.5, 1.0)


def test_semigroup_is_unital():
    identity = FourierOperator.identity(3)
    np.testing.assert_allclose(apply_semigroup(identity, 2.0).to_vector(), identity.to_vector())


def test_semigroup_on_weight_two_string():
    F = FourierOperator.from_coefficients(2, {'12': 1.0})
    assert apply_semigroup(F, 0.3).coefficient('12') == pytest.approx(math.exp(-0.6))


def test_semigroup_law(rng):
    F = to_fourier(random_matrix(3, rng))
    left = apply_semigroup(apply_semigroup(F, 0.2), 0.5)
    np.testing.assert_allclose(left.to_vector(), apply_semigroup(F, 0.7).to_vector(), atol=1e-12)


def test_semigroup_rejects_negative_time(sigma_z):
    with pytest.raises(ValidationError):
        apply_semigroup(sigma_z, -0.1)


def test_dense_semigroup_matches_multiplier(rng):
    A = random_matrix(3, rng)
    np.testing.assert_allclose(
        apply_semigroup_dense(A, 0.4).matrix, to_dense(apply_semigroup(A, 0.4)).matrix, atol=1e-12,
    )


def test_generator_multiplies_by_weight():
    F = FourierOperator.from_coefficients(3, {'000': 1.0, '310': 2.0})
    result = generator(F)
    assert result.coefficient('000') == 0
    assert result.coefficient('310') == pytest.approx(4.0)


def test_generator_is_sum_of_derivations(rng):
    F = to_fourier(random_matrix(3, rng))
    total = sum((d_j(F, j) for j in range(1, 3)), d_j(F, 0))
    np.testing.assert_allclose(generator(F).to_vector(), total.to_vector(), atol=1e-12)
    np.testing.assert_allclose(to_dense(generator(F)).matrix, generator_dense(F).matrix, atol=1e-12)


def test_generator_is_derivative_of_semigroup(rng):
    F = to_fourier(random_hermitian(2, rng))
    errors = []
    for h in (1e-4, 1e-5):
        difference = (F - apply_semigroup(F, h)) * (1 / h)
        errors.append((difference - generator(F)).norm_l2())
    assert errors[1] < errors[0] < 1e-3


def test_dirichlet_identity(rng):
    F = to_fourier(random_hermitian(3, rng))
    assert profile(F).total2 == pytest.approx(inner(F, generator(F)).real, abs=1e-10)


def test_variance_bounded_by_total_influence(rng):
    F = to_fourier(random_hermitian(3, rng))
    assert variance(F) <= profile(F).total2 + 1e-12


def test_carre_du_champ_examples(sigma_z):
    np.testing.assert_allclose(carre_du_champ(DenseOperator.identity(2)).matrix, np.zeros((4, 4)), atol=1e-14)
    np.testing.assert_allclose(carre_du_champ(sigma_z).matrix, np.eye(2), atol=1e-14)


def test_carre_du_champ_is_positive(rng):
    gamma = carre_du_champ(random_matrix(3, rng)).matrix
    assert np.min(np.linalg.eigvalsh(gamma)) >= -1e-10


def test_gradient_domination(rng):
    for _ in range(5):
        assert check_gradient_domination(random_matrix(3, rng)).satisfied


def test_hypercontractivity_at_zero_is_equality(rng):
    report = check_hypercontractivity(random_hermitian(2, rng), 0.0)
    assert report.satisfied
    assert report.lhs == pytest.approx(report.rhs)


def test_hypercontractivity_on_sigma_z(sigma_z):
    report = check_hypercontractivity(sigma_z, 1.0)
    assert report.lhs == pytest.approx(math.exp(-1))
    assert report.rhs == pytest.approx(1.0)
    assert report.satisfied


def test_gradient_estimate_on_sigma_z(sigma_z):
    for t in T_GRID:
        report = check_gradient_estimate(sigma_z, t)
        assert report.slack == pytest.approx(math.exp(-t) - math.exp(-2 * t), abs=1e-12)
        assert report.satisfied


def test_djPt_bound_on_sigma_z(sigma_z):
    report = check_djPt_bound(sigma_z, math.log(2))
    assert report.lhs == pytest.approx(0.25)
    assert report.rhs == pytest.approx(1.0)
    assert report.satisfied


def test_djPt_bound_of_identity():
    report = check_djPt_bound(DenseOperator.identity(2), 0.5)
    assert report.lhs == pytest.approx(0.0, abs=1e-14)
    assert report.satisfied


def test_djPt_bound_requires_positive_time(sigma_z):
    with pytest.raises(ValidationError):
        check_djPt_bound(sigma_z, 0.0)


def test_intertwining():
    F = FourierOperator.from_coefficients(2, {'31': 1.0})
    report = check_intertwining(F, 0.7, 0)
    assert report.lhs == 0.0
    assert report.satisfied


def test_intertwining_dense_cross_check(rng):
    A = random_matrix(3, rng)
    for j in range(3):
        report = check_intertwining(A, 0.5, j, dense=True)
        assert report.name == 'intertwining_dense'
        assert report.satisfied


def test_smoothing_on_sigma_z(sigma_z):
    for t in (0.0, *T_GRID):
        report = check_smoothing(sigma_z, t)
        assert report.lhs == pytest.approx(math.expm1(-t) ** 2)
        assert report.rhs == pytest.approx(t)
        assert report.satisfied


@pytest.mark.parametrize('t', T_GRID)
def test_lemmas_hold_on_random_qbfs(rng, t):
    for n in (1, 2, 3):
        A = random_qbf(n, 2 ** (n - 1), rng)
        for check in (
            check_hypercontractivity,
            check_gradient_estimate,
            check_djPt_bound,
            check_smoothing,
            check_poincare_contraction,
        ):
            report = check(A, t)
            assert report.satisfied, (check.__name__, n, report)


def test_poincare_contraction_on_centered_operator(rng):
    report = check_poincare_contraction(random_hermitian(3, rng), 1.0)
    assert report.lhs <= report.rhs + 1e-12
