"""Functional inequalities for operators on qubits, as evaluate-and-report operations.

Inequalities whose constants are explicit (π, √2π) are asserted. Those with an
unnamed universal constant are evaluated at C = 1 and their implied constant is
reported.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Sequence

import numpy as np
from scipy import integrate

from qboolean.exceptions import NotQuantumBooleanError, ValidationError
from qboolean.models import DEFAULT_TOLERANCES, DenseOperator, InequalityReport
from qboolean.services.ensembles import classical_embed, dictator, majority, parity, random_qbf
from qboolean.services.influence import d_j, profile
from qboolean.services.pauli_core import (
    Operator,
    ensure_dense,
    ensure_fourier,
    is_balanced,
    is_quantum_boolean,
    normalized_trace,
    schatten_norm,
    to_dense,
    variance,
)
from qboolean.services.semigroup import carre_du_champ
from qboolean.utils.helpers import instance_rng, log_plus, operator_norm, psd_sqrt, scaled_tolerance

logger = logging.getLogger(__name__)

L1L2_PREFACTOR = 2 * math.e / (1 - math.exp(-1))


def _inequality(
    name: str,
    lhs: float,
    rhs: float,
    *,
    asserted: bool,
    tol: float,
    constant: float = 1.0,
    lower: bool = False,
    satisfied: bool | None = None,
    values: dict[str, Any] | None = None,
    metadata: dict[str, Any] | None = None,
) -> InequalityReport:
    """Build a report for lhs <= C·rhs, or lhs >= C·rhs when `lower` is set."""
    lhs, rhs = float(lhs), float(rhs)
    if rhs > 0:
        implied = lhs / rhs
    elif not lower and abs(lhs) <= tol:
        implied = 0.0
    else:
        implied = math.inf
    if satisfied is None:
        bound = constant * rhs
        if lower:
            satisfied = lhs >= bound - scaled_tolerance(tol, bound)
        else:
            satisfied = lhs <= bound + scaled_tolerance(tol, bound)
    return InequalityReport(
        name=name,
        lhs=lhs,
        rhs_without_constant=rhs,
        implied_constant=implied,
        satisfied_at=implied,
        asserted=asserted,
        satisfied=bool(satisfied),
        values=dict(values or {}),
        metadata=dict(metadata or {}),
    )


def _centered(A: Operator) -> DenseOperator:
    dense = ensure_dense(A)
    return DenseOperator(dense.n, dense.matrix - normalized_trace(dense) * np.eye(dense.dim))


def talagrand_term(a: float) -> float:
    """a(1+a) / (1 + log⁺(1/a))^{1/2}, with the limit 0 at a = 0."""
    if a <= 0:
        return 0.0
    return a * (1 + a) / math.sqrt(1 + log_plus(1 / a))


def poincare_l1(A: Operator, tol: float = DEFAULT_TOLERANCES.psd) -> InequalityReport:
    """‖A - 2⁻ⁿtr(A)𝟙‖₁ <= π Inf¹(A), asserted."""
    lhs = schatten_norm(_centered(A), 1).value
    rhs = math.pi * profile(A).total1
    return _inequality('poincare_l1', lhs, rhs, asserted=True, tol=tol, metadata={'n': A.n})


def poincare_l2(A: Operator, tol: float = DEFAULT_TOLERANCES.psd) -> InequalityReport:
    """Var(A) <= Inf²(A), asserted."""
    F = ensure_fourier(A)
    rhs = float(np.sum(F.weights() * np.abs(F.values) ** 2))
    return _inequality('poincare_l2', variance(F), rhs, asserted=True, tol=tol, metadata={'n': F.n})


def strong_poincare_l1(A: Operator, tol: float = DEFAULT_TOLERANCES.psd) -> InequalityReport:
    """The chain ‖A - 2⁻ⁿtr(A)‖₁ <= π‖(Σ_j d_j(A)* d_j(A))^{1/2}‖₁ <= √2π‖Γ(A)^{1/2}‖₁.

    Both steps are asserted; the report's rhs is the middle term times π.
    """
    A = ensure_dense(A)
    lhs = schatten_norm(_centered(A), 1).value
    gradient = np.zeros((A.dim, A.dim), dtype=complex)
    for j in range(A.n):
        derived = to_dense(d_j(A, j)).matrix
        gradient += derived.conj().T @ derived
    middle = float(np.real(np.trace(psd_sqrt(gradient)))) / A.dim
    right = float(np.real(np.trace(psd_sqrt(carre_du_champ(A).matrix)))) / A.dim
    first_step = lhs <= math.pi * middle + scaled_tolerance(tol, math.pi * middle)
    second_step = middle <= math.sqrt(2) * right + scaled_tolerance(tol, right)
    return _inequality(
        'strong_poincare_l1', lhs, math.pi * middle, asserted=True, tol=tol,
        satisfied=first_step and second_step,
        values={
            'middle': middle,
            'right': right,
            'first_step': bool(first_step),
            'second_step': bool(second_step),
        },
        metadata={'n': A.n},
    )


def talagrand_l1(
    A: Operator,
    tol: float = DEFAULT_TOLERANCES.psd,
    constant: float | None = None,
) -> InequalityReport:
    """Var(A) <= C Σ_j ‖d_jA‖₁(1+‖d_jA‖₁)/(1+log⁺(1/‖d_jA‖₁))^{1/2}.

    Operators with ‖A‖ > 1 are rescaled to norm 1 with a warning. The report is
    asserted only when a pinned constant is supplied.

    Args:
        A: Operator
        tol: Relative slack
        constant: Pinned C to assert against, or None to report only

    Returns:
        InequalityReport with the scale factor in values
    """
    A = ensure_dense(A)
    norm = operator_norm(A.matrix)
    scale = 1.0
    if norm > 1 + tol:
        scale = 1.0 / norm
        logger.warning('Rescaling operator with norm %.6g to norm 1 for the Talagrand bound', norm)
        A = A * scale
    influences = profile(A).inf1
    rhs = sum(talagrand_term(a) for a in influences)
    return _inequality(
        'talagrand_l1', variance(A), rhs,
        asserted=constant is not None, tol=tol,
        constant=1.0 if constant is None else constant,
        values={'scale': scale},
        metadata={'n': A.n},
    )


def calibrate_c_emp(n_max: int, count: int, seed: int) -> float:
    """Largest Talagrand implied constant over a seeded sweep of balanced operators.

    Covers dictator, parity and majority (odd n) for n = 1..n_max, plus `count`
    Haar-random balanced quantum Boolean functions per size for n >= 2.
    """
    operators = []
    for n in range(1, n_max + 1):
        operators += [classical_embed(dictator(n)), classical_embed(parity(n))]
        if n % 2 == 1:
            operators.append(classical_embed(majority(n)))
        if n >= 2:
            operators += [random_qbf(n, 2 ** (n - 1), instance_rng(seed, n, index)) for index in range(count)]
    worst = max(talagrand_l1(A).implied_constant for A in operators)
    logger.info('Talagrand sweep over %d operators, n<=%d: max implied constant %.6f', len(operators), n_max, worst)
    return worst


def talagrand_l1l2(A: Operator, reading: str = 'norm', tol: float = DEFAULT_TOLERANCES.psd) -> InequalityReport:
    """Var(A) against the L¹-L² sum Σ_j Inf²_j² / (1 + log(Inf²_j / Inf¹_j)), report-only.

    The prefactor 2e^{(2α-μ)₊/2λ} / (α(1-e^{-1})) is evaluated at α = λ = 1, μ = 0.

    Args:
        A: Operator
        reading: 'norm' takes Inf²_j = ‖d_jA‖₂; 'squared' takes ‖d_jA‖₂²
        tol: Relative slack

    Raises:
        ValidationError: On an unknown reading
    """
    if reading not in ('norm', 'squared'):
        raise ValidationError(f"Reading must be 'norm' or 'squared', got '{reading}'.")
    prof = profile(A)
    rhs = 0.0
    for inf1, inf2 in zip(prof.inf1, prof.inf2):
        if inf1 <= 0 or inf2 <= 0:
            continue
        l2 = math.sqrt(inf2) if reading == 'norm' else inf2
        rhs += l2 ** 2 / (1 + log_plus(l2 / inf1))
    return _inequality(
        'talagrand_l1l2', variance(A), L1L2_PREFACTOR * rhs,
        asserted=False, tol=tol,
        values={'reading': reading, 'prefactor': L1L2_PREFACTOR},
        metadata={'n': A.n},
    )


def kkl_max_influence(
    A: Operator,
    p: int = 1,
    tol: float = DEFAULT_TOLERANCES.qbf,
    constant: float = 1.0,
) -> InequalityReport:
    """max_j Inf^p_j(A) >= C √(log n)/n for balanced quantum Boolean A, report-only.

    p = 2 evaluates the open L² variant.

    Raises:
        NotQuantumBooleanError: If A is not a balanced quantum Boolean function
    """
    if not is_quantum_boolean(A, tol) or not is_balanced(A, tol):
        raise NotQuantumBooleanError('KKL requires a balanced quantum Boolean function.')
    prof = profile(A)
    influences = prof.inf1 if p == 1 else prof.inf2
    n = A.n
    rhs = math.sqrt(math.log(n)) / n
    lhs = max(influences)
    name = 'kkl' if p == 1 else 'kkl_l2'
    return _inequality(
        name, lhs, rhs, asserted=False, tol=tol, constant=constant, lower=True,
        values={'degenerate': n == 1, 'argmax': int(np.argmax(influences))},
        metadata={'n': n},
    )


def lemma_aux_kkl(a: Sequence[float], c: float) -> bool | None:
    """Arithmetic lemma behind KKL.

    If Σ_j a_j(1+a_j)/(1+log⁺(1/a_j))^{1/2} >= c then
    max_j a_j >= min{c/(2√2), 1} √(log n)/n.

    Args:
        a: Nonnegative reals
        c: Positive real

    Returns:
        The truth of the conclusion, or None when the hypothesis fails

    Raises:
        ValidationError: On negative entries, empty input or c <= 0
    """
    a = [float(x) for x in a]
    if not a or any(x < 0 for x in a) or not c > 0:
        raise ValidationError('Lemma needs a nonempty nonnegative sequence and c > 0.')
    hypothesis = sum(talagrand_term(x) for x in a)
    if hypothesis < c * (1 - 1e-12):
        return None
    n = len(a)
    bound = min(c / (2 * math.sqrt(2)), 1.0) * math.sqrt(math.log(n)) / n
    return max(a) >= bound * (1 - 1e-12)


def integral_lemma_check(alpha: float, a: float, r: float, tol: float = DEFAULT_TOLERANCES.psd) -> InequalityReport:
    """∫₀^r t^{-(1-1/p(t))} a^{2/p(t)-1} dt against (1/√α)(1+a)/(1+log⁺(1/a))^{1/2}.

    p(t) = 1 + e^{-2αt}. The integral uses adaptive quadrature at relative error 1e-8.

    Raises:
        ValidationError: If alpha <= 0, a < 0 or r is outside [0, min(1, 1/2α)]
    """
    if not alpha > 0 or not a >= 0:
        raise ValidationError(f'Need alpha > 0 and a >= 0, got alpha={alpha}, a={a}.')
    upper = min(1.0, 1.0 / (2 * alpha))
    if not 0 <= r <= upper * (1 + 1e-12):
        raise ValidationError(f'r={r} outside [0, {upper}].')

    def integrand(t: float) -> float:
        p = 1 + math.exp(-2 * alpha * t)
        return t ** (-(1 - 1 / p)) * a ** (2 / p - 1)

    if a == 0 or r == 0:
        lhs, error = 0.0, 0.0
    else:
        lhs, error = integrate.quad(integrand, 0.0, r, epsrel=1e-8, limit=200)
    rhs = 0.0 if a == 0 else (1 + a) / (math.sqrt(alpha) * math.sqrt(1 + log_plus(1 / a)))
    return _inequality(
        'integral_lemma', lhs, rhs, asserted=False, tol=tol,
        values={'alpha': alpha, 'a': a, 'r': r, 'quadrature_error': error},
    )


def isoperimetry_check(
    P: Operator,
    variant: str = 'l1',
    tol: float = DEFAULT_TOLERANCES.qbf,
) -> InequalityReport:
    """Σ_j Inf_j(P) >= C τ(1-τ) log(n/(τ(1-τ)))^{1/2} for a projector P, report-only.

    τ = 2⁻ⁿtr P. The 'l2' variant is the conjectured form with Σ_j Inf²_j and no
    square root. τ ∈ {0, 1} is degenerate and reported as satisfied.

    Raises:
        NotQuantumBooleanError: If P is not a projector
        ValidationError: On an unknown variant
    """
    if variant not in ('l1', 'l2'):
        raise ValidationError(f"Variant must be 'l1' or 'l2', got '{variant}'.")
    P = ensure_dense(P)
    matrix = P.matrix
    if operator_norm(matrix - matrix.conj().T) > tol or operator_norm(matrix @ matrix - matrix) > tol:
        raise NotQuantumBooleanError('Isoperimetry requires an orthogonal projector.')
    tau = float(np.real(normalized_trace(P)))
    name = 'isoperimetry' if variant == 'l1' else 'isoperimetry_l2'
    prof = profile(P)
    lhs = prof.total1 if variant == 'l1' else prof.total2
    spread = tau * (1 - tau)
    if spread <= tol:
        return _inequality(
            name, lhs, 0.0, asserted=False, tol=tol, lower=True, satisfied=True,
            values={'tau': tau, 'degenerate': True}, metadata={'n': P.n},
        )
    log_term = math.log(P.n / spread)
    rhs = spread * (math.sqrt(log_term) if variant == 'l1' else log_term)
    return _inequality(
        name, lhs, rhs, asserted=False, tol=tol, lower=True,
        values={'tau': tau, 'degenerate': False}, metadata={'n': P.n},
    )
