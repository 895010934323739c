"""Depolarizing semigroup P_t, its generator 𝓛, carré du champ Γ and lemma checks."""

from __future__ import annotations

import math

import numpy as np

from qboolean.exceptions import ValidationError
from qboolean.models import DEFAULT_TOLERANCES, DenseOperator, FourierOperator, SemigroupCheckReport
from qboolean.services.influence import d_j
from qboolean.services.pauli_core import (
    Operator,
    ensure_dense,
    ensure_fourier,
    normalized_trace,
    schatten_norm,
    to_dense,
    to_fourier,
)
from qboolean.utils.helpers import (
    hermitian_part,
    max_eigenvalue,
    min_eigenvalue,
    operator_norm,
    scaled_tolerance,
    site_expectation,
)

INTERTWINING_TOL = 1e-14


def _check_time(t: float, strict: bool = False) -> None:
    if strict and not t > 0:
        raise ValidationError(f'Time must be positive, got {t}.')
    if not t >= 0:
        raise ValidationError(f'Time must be nonnegative, got {t}.')


def hypercontractive_exponent(t: float) -> float:
    """p(t) = 1 + e^{-2t}."""
    return 1.0 + math.exp(-2.0 * t)


def apply_semigroup(F: Operator, t: float) -> FourierOperator:
    """P_t as the multiplier Â_s ↦ e^{-t|supp(s)|} Â_s.

    Raises:
        ValidationError: If t < 0
    """
    _check_time(t)
    F = ensure_fourier(F)
    return F.with_values(F.values * np.exp(-t * F.weights()))


def generator(F: Operator) -> FourierOperator:
    """𝓛 = Σ_j d_j as the multiplier Â_s ↦ |supp(s)| Â_s."""
    F = ensure_fourier(F)
    return F.with_values(F.values * F.weights())


def d_j_dense(A: Operator, j: int) -> DenseOperator:
    """d_j computed as X - 𝟙_j ⊗ tr_j(X)/2 on the matrix."""
    A = ensure_dense(A)
    if not 0 <= j < A.n:
        raise ValidationError(f'Qubit index {j} out of range for n={A.n}.')
    return DenseOperator(A.n, A.matrix - site_expectation(A.matrix, A.n, j))


def apply_semigroup_dense(A: Operator, t: float) -> DenseOperator:
    """P_t as the tensor power of e^{-t} id + (1 - e^{-t}) tr(·)𝟙/2, applied site by site."""
    _check_time(t)
    A = ensure_dense(A)
    decay = math.exp(-t)
    matrix = A.matrix
    for site in range(A.n):
        matrix = decay * matrix + (1 - decay) * site_expectation(matrix, A.n, site)
    return DenseOperator(A.n, matrix)


def generator_dense(A: Operator) -> DenseOperator:
    A = ensure_dense(A)
    return DenseOperator(A.n, sum(d_j_dense(A, j).matrix for j in range(A.n)))


def carre_du_champ(A: Operator) -> DenseOperator:
    """Γ(A) with 2Γ(A) = 𝓛(A*)A + A*𝓛(A) - 𝓛(A*A).

    Args:
        A: Operator

    Returns:
        Hermitian, positive semidefinite DenseOperator
    """
    A = ensure_dense(A)
    n = A.n

    def lindblad(matrix: np.ndarray) -> np.ndarray:
        return to_dense(generator(to_fourier(DenseOperator(n, matrix)))).matrix

    a = A.matrix
    a_star = a.conj().T
    twice = lindblad(a_star) @ a + a_star @ lindblad(a) - lindblad(a_star @ a)
    return DenseOperator(n, hermitian_part(twice / 2))


def _report(name: str, t: float, lhs: float, rhs: float, slack: float, tol: float, **metadata) -> SemigroupCheckReport:
    return SemigroupCheckReport(
        name=name,
        t=t,
        lhs=float(lhs),
        rhs=float(rhs),
        satisfied=bool(slack >= -tol),
        slack=float(slack),
        metadata=metadata,
    )


def check_hypercontractivity(A: Operator, t: float, tol: float = DEFAULT_TOLERANCES.psd) -> SemigroupCheckReport:
    """‖P_t A‖₂ <= ‖A‖_{p(t)}."""
    _check_time(t)
    p = hypercontractive_exponent(t)
    lhs = apply_semigroup(A, t).norm_l2()
    rhs = schatten_norm(A, p).value
    return _report('hypercontractivity', t, lhs, rhs, rhs - lhs, scaled_tolerance(tol, rhs), p=p)


def check_gradient_estimate(A: Operator, t: float, tol: float = DEFAULT_TOLERANCES.psd) -> SemigroupCheckReport:
    """Γ(P_t A) ⪯ e^{-t} P_t Γ(A) as a PSD ordering."""
    _check_time(t)
    A = ensure_dense(A)
    left = carre_du_champ(to_dense(apply_semigroup(A, t))).matrix
    right = math.exp(-t) * to_dense(apply_semigroup(carre_du_champ(A), t)).matrix
    scale = operator_norm(A.matrix) ** 2
    return _report(
        'gradient_estimate', t,
        max_eigenvalue(left), max_eigenvalue(right), min_eigenvalue(right - left),
        scaled_tolerance(tol, scale),
    )


def check_djPt_bound(A: Operator, t: float, tol: float = DEFAULT_TOLERANCES.psd) -> SemigroupCheckReport:
    """Σ_j (d_j P_t A)* (d_j P_t A) ⪯ ‖A‖²/(e^t - 1) 𝟙, with the per-qubit corollary.

    The corollary ‖d_j P_t A‖ <= ‖A‖/√(e^t - 1) must hold as well for the check to pass.

    Raises:
        ValidationError: If t <= 0
    """
    _check_time(t, strict=True)
    A = ensure_dense(A)
    smoothed = apply_semigroup(A, t)
    norm = operator_norm(A.matrix)
    bound = norm ** 2 / math.expm1(t)
    gradient = np.zeros((A.dim, A.dim), dtype=complex)
    per_qubit = []
    for j in range(A.n):
        derived = to_dense(d_j(smoothed, j)).matrix
        gradient += derived.conj().T @ derived
        per_qubit.append(operator_norm(derived))
    lhs = max_eigenvalue(gradient)
    corollary_bound = norm / math.sqrt(math.expm1(t))
    slack = min(bound - lhs, corollary_bound - max(per_qubit, default=0.0))
    return _report(
        'djPt_bound', t, lhs, bound, slack, scaled_tolerance(tol, norm ** 2),
        max_qubit_norm=max(per_qubit, default=0.0), qubit_bound=corollary_bound,
    )


def check_intertwining(
    A: Operator,
    t: float,
    j: int,
    dense: bool = False,
    tol: float = DEFAULT_TOLERANCES.roundtrip,
) -> SemigroupCheckReport:
    """d_j P_t = P_t d_j.

    In the Fourier representation both sides are coefficient multiplications and the
    residual must be at most 1e-14. With dense=True the left side is recomputed from
    matrices with site maps and compared at tolerance `tol`.
    """
    _check_time(t)
    F = ensure_fourier(A)
    left = d_j(apply_semigroup(F, t), j)
    right = apply_semigroup(d_j(F, j), t)
    residual = float(np.max(np.abs(left.values - right.values), initial=0.0))
    if not dense:
        return _report('intertwining', t, residual, 0.0, -residual, INTERTWINING_TOL, qubit=j)
    dense_left = d_j_dense(apply_semigroup_dense(to_dense(F), t), j).matrix
    dense_residual = float(np.max(np.abs(dense_left - to_dense(right).matrix), initial=0.0))
    residual = max(residual, dense_residual)
    scale = float(np.max(np.abs(F.values), initial=0.0))
    return _report(
        'intertwining_dense', t, residual, 0.0, -residual, scaled_tolerance(tol, scale), qubit=j,
    )


def check_smoothing(A: Operator, t: float, tol: float = DEFAULT_TOLERANCES.psd) -> SemigroupCheckReport:
    """‖A - P_t A‖₂² <= t Inf²(A)."""
    _check_time(t)
    F = ensure_fourier(A)
    lhs = float(np.sum(np.abs(F.values * -np.expm1(-t * F.weights())) ** 2))
    rhs = t * float(np.sum(F.weights() * np.abs(F.values) ** 2))
    return _report('smoothing', t, lhs, rhs, rhs - lhs, scaled_tolerance(tol, rhs))


def check_poincare_contraction(A: Operator, t: float, tol: float = DEFAULT_TOLERANCES.psd) -> SemigroupCheckReport:
    """‖P_t(A - 2⁻ⁿtr(A)𝟙)‖₂ <= e^{-t} ‖A - 2⁻ⁿtr(A)𝟙‖₂."""
    _check_time(t)
    F = ensure_fourier(A)
    centered = F - FourierOperator.identity(F.n) * normalized_trace(F)
    lhs = apply_semigroup(centered, t).norm_l2()
    rhs = math.exp(-t) * centered.norm_l2()
    return _report('poincare_contraction', t, lhs, rhs, rhs - lhs, scaled_tolerance(tol, rhs))


def check_gradient_domination(A: Operator, tol: float = DEFAULT_TOLERANCES.psd) -> SemigroupCheckReport:
    """2Γ(A) ⪰ Σ_j d_j(A)* d_j(A) as a PSD ordering."""
    A = ensure_dense(A)
    gradient = np.zeros((A.dim, A.dim), dtype=complex)
    for j in range(A.n):
        derived = to_dense(d_j(A, j)).matrix
        gradient += derived.conj().T @ derived
    twice = 2 * carre_du_champ(A).matrix
    return _report(
        'carre_du_champ', 0.0, max_eigenvalue(gradient), max_eigenvalue(twice),
        min_eigenvalue(twice - gradient), scaled_tolerance(tol, operator_norm(A.matrix) ** 2),
    )
