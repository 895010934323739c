"""Generalized depolarizing semigroup on qubits weighted by a product state σ = ω^{⊗n}.

Norms are KMS norms ‖i_p(x)‖ = tr(|σ^{1/2p} x σ^{1/2p}|^p)^{1/p} with the
unnormalized trace; for ω = 𝟙/2 they coincide with the normalized Schatten norms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import linalg

from qboolean.exceptions import ValidationError
from qboolean.models import DEFAULT_TOLERANCES, DenseOperator, InequalityReport, SemigroupCheckReport
from qboolean.services.inequalities import _inequality, talagrand_term
from qboolean.utils.helpers import (
    hermitian_part,
    instance_rng,
    kron_all,
    max_eigenvalue,
    min_eigenvalue,
    operator_norm,
    scaled_tolerance,
    singular_values,
    site_expectation,
)

logger = logging.getLogger(__name__)

GRADIENT_K = 0.5
GRADIENT_M = math.sqrt(2)
SPECTRAL_GAP = 1.0
DERIVATION_DECAY = 1.0
DIRICHLET_TOL = 1e-10
AXIOM_T_GRID = (0.1, 0.5, 1.0, 2.0)
AXIOM_P_GRID = (1.0, 1.5, 2.0, 4.0)
HYPERCONTRACTIVITY_T_GRID = tuple(0.05 * k for k in range(1, 21))


@dataclass(frozen=True, eq=False)
class WeightedContext:
    """Reference state σ = ω^{⊗n} with cached spectral powers.

    Attributes:
        omega: 2×2 positive definite density matrix
        n: Number of qubits
    """

    omega: np.ndarray
    n: int
    _eigenvalues: np.ndarray = field(init=False, repr=False)
    _eigenvectors: np.ndarray = field(init=False, repr=False)
    _powers: dict[float, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        omega = np.asarray(self.omega, dtype=complex)
        if omega.shape != (2, 2):
            raise ValidationError(f'omega must be 2x2, got shape {omega.shape}.')
        if np.max(np.abs(omega - omega.conj().T)) > 1e-12:
            raise ValidationError('omega must be Hermitian.')
        if abs(np.trace(omega) - 1) > 1e-10:
            raise ValidationError(f'omega must have trace 1, got {np.trace(omega).real:.6g}.')
        if self.n < 1:
            raise ValidationError(f'Need n >= 1, got {self.n}.')
        eigenvalues, eigenvectors = linalg.eigh(hermitian_part(omega))
        if eigenvalues[0] <= 0:
            raise ValidationError('omega is singular; a full-rank state is required.')
        omega.setflags(write=False)
        object.__setattr__(self, 'omega', omega)
        object.__setattr__(self, '_eigenvalues', eigenvalues)
        object.__setattr__(self, '_eigenvectors', eigenvectors)

    @classmethod
    def from_diagonal(cls, q: float, n: int) -> WeightedContext:
        """ω = diag(q, 1 - q)."""
        if not 0 < q < 1:
            raise ValidationError(f'Diagonal weight must lie in (0, 1), got {q}.')
        return cls(np.diag([q, 1 - q]), n)

    @classmethod
    def tracial(cls, n: int) -> WeightedContext:
        return cls(np.eye(2) / 2, n)

    @property
    def dim(self) -> int:
        return 2 ** self.n

    @property
    def condition_number(self) -> float:
        """Condition number of σ."""
        return float((self._eigenvalues[-1] / self._eigenvalues[0]) ** self.n)

    def sigma_power(self, exponent: float) -> np.ndarray:
        """σ^exponent, computed from the eigendecomposition of ω."""
        exponent = float(exponent)
        if exponent not in self._powers:
            v = self._eigenvectors
            site = (v * self._eigenvalues ** exponent) @ v.conj().T
            self._powers[exponent] = kron_all([site] * self.n)
        return self._powers[exponent]

    @property
    def sigma(self) -> np.ndarray:
        return self.sigma_power(1.0)


def _matrix(ctx: WeightedContext, x: DenseOperator | np.ndarray) -> np.ndarray:
    matrix = x.matrix if isinstance(x, DenseOperator) else np.asarray(x, dtype=complex)
    if matrix.shape != (ctx.dim, ctx.dim):
        raise ValidationError(f'Operator shape {matrix.shape} does not match n={ctx.n}.')
    return matrix


def _check_qubit(ctx: WeightedContext, j: int) -> None:
    if not 0 <= j < ctx.n:
        raise ValidationError(f'Qubit index {j} out of range for n={ctx.n}.')


def kms_norm(ctx: WeightedContext, x: DenseOperator | np.ndarray, p: float) -> float:
    """‖i_p(x)‖ = tr(|σ^{1/2p} x σ^{1/2p}|^p)^{1/p}; p = inf gives the operator norm.

    Raises:
        ValidationError: If p < 1
    """
    if not p >= 1:
        raise ValidationError(f'KMS exponent must be >= 1, got {p}.')
    matrix = _matrix(ctx, x)
    if math.isinf(p):
        return operator_norm(matrix)
    weight = ctx.sigma_power(1 / (2 * p))
    values = singular_values(weight @ matrix @ weight)
    return float(np.sum(values ** p) ** (1 / p))


def kms_inner(ctx: WeightedContext, x: DenseOperator | np.ndarray, y: DenseOperator | np.ndarray) -> complex:
    """⟨i₂(x), i₂(y)⟩ = tr(σ^{1/2} x* σ^{1/2} y)."""
    half = ctx.sigma_power(0.5)
    return complex(np.trace(half @ _matrix(ctx, x).conj().T @ half @ _matrix(ctx, y)))


def state_expectation(ctx: WeightedContext, x: DenseOperator | np.ndarray) -> complex:
    """φ(x) = tr(σ x)."""
    return complex(np.trace(ctx.sigma @ _matrix(ctx, x)))


def weighted_d_j(ctx: WeightedContext, x: DenseOperator | np.ndarray, j: int) -> DenseOperator:
    """d_j = id - 𝟙 ⊗ tr(ω ·) at site j."""
    _check_qubit(ctx, j)
    matrix = _matrix(ctx, x)
    return DenseOperator(ctx.n, matrix - site_expectation(matrix, ctx.n, j, ctx.omega))


def weighted_generator(ctx: WeightedContext, x: DenseOperator | np.ndarray) -> DenseOperator:
    """𝓛_ω = Σ_j d_j."""
    matrix = _matrix(ctx, x)
    return DenseOperator(ctx.n, sum(weighted_d_j(ctx, matrix, j).matrix for j in range(ctx.n)))


def weighted_semigroup(ctx: WeightedContext, x: DenseOperator | np.ndarray, t: float) -> DenseOperator:
    """(e^{-t} id + (1 - e^{-t}) tr(ω ·)𝟙)^{⊗n} applied site by site.

    Raises:
        ValidationError: If t < 0
    """
    if not t >= 0:
        raise ValidationError(f'Time must be nonnegative, got {t}.')
    matrix = _matrix(ctx, x)
    decay = math.exp(-t)
    for site in range(ctx.n):
        matrix = decay * matrix + (1 - decay) * site_expectation(matrix, ctx.n, site, ctx.omega)
    return DenseOperator(ctx.n, matrix)


def weighted_carre_du_champ(ctx: WeightedContext, x: DenseOperator | np.ndarray) -> DenseOperator:
    """Γ(x) with 2Γ(x) = 𝓛(x*)x + x*𝓛(x) - 𝓛(x*x)."""
    a = _matrix(ctx, x)
    a_star = a.conj().T
    twice = (
        weighted_generator(ctx, a_star).matrix @ a
        + a_star @ weighted_generator(ctx, a).matrix
        - weighted_generator(ctx, a_star @ a).matrix
    )
    return DenseOperator(ctx.n, hermitian_part(twice / 2))


def e_k(K: float, t: float) -> float:
    """e_K(t) = 2∫₀^t e^{2Ks} ds: (e^{2Kt} - 1)/K, or 2t when K = 0."""
    if K == 0:
        return 2.0 * t
    return math.expm1(2 * K * t) / K


def superoperator_gap(ctx: WeightedContext) -> float:
    """Smallest nonzero eigenvalue of 𝓛_ω acting on 2ⁿ×2ⁿ matrices."""
    dim = ctx.dim
    columns = []
    for index in range(dim * dim):
        unit = np.zeros(dim * dim, dtype=complex)
        unit[index] = 1.0
        columns.append(weighted_generator(ctx, unit.reshape(dim, dim)).matrix.ravel())
    eigenvalues = np.linalg.eigvals(np.column_stack(columns)).real
    nonzero = eigenvalues[np.abs(eigenvalues) > 1e-8]
    return float(np.min(nonzero)) if nonzero.size else math.inf


def _check(name: str, t: float, lhs: float, rhs: float, slack: float, tol: float, **metadata: Any) -> SemigroupCheckReport:
    return SemigroupCheckReport(
        name=name, t=t, lhs=float(lhs), rhs=float(rhs),
        satisfied=bool(slack >= -tol), slack=float(slack), metadata=metadata,
    )


def _worst(reports: list[SemigroupCheckReport], name: str) -> SemigroupCheckReport:
    worst = min(reports, key=lambda report: report.slack if report.satisfied else report.slack - 1e300)
    if all(report.satisfied for report in reports):
        return SemigroupCheckReport(
            name=name, t=worst.t, lhs=worst.lhs, rhs=worst.rhs,
            satisfied=True, slack=worst.slack, metadata={**worst.metadata, 'cases': len(reports)},
        )
    failing = [report for report in reports if not report.satisfied]
    first = failing[0]
    return SemigroupCheckReport(
        name=name, t=first.t, lhs=first.lhs, rhs=first.rhs, satisfied=False, slack=first.slack,
        metadata={**first.metadata, 'cases': len(reports), 'failures': len(failing)},
    )


def reverse_poincare_check(
    ctx: WeightedContext,
    x: DenseOperator | np.ndarray,
    t: float,
    K: float = GRADIENT_K,
    tol: float = DEFAULT_TOLERANCES.psd,
) -> SemigroupCheckReport:
    """Γ(P_t x) ⪯ (P_t(x*x) - P_t(x)*P_t(x))/e_K(t) ⪯ ‖x‖²/e_K(t) 𝟙.

    Raises:
        ValidationError: If t <= 0
    """
    if not t > 0:
        raise ValidationError(f'Time must be positive, got {t}.')
    a = _matrix(ctx, x)
    scale = e_k(K, t)
    smoothed = weighted_semigroup(ctx, a, t).matrix
    left = weighted_carre_du_champ(ctx, smoothed).matrix
    middle = (weighted_semigroup(ctx, a.conj().T @ a, t).matrix - smoothed.conj().T @ smoothed) / scale
    norm_sq = operator_norm(a) ** 2
    right = norm_sq / scale * np.eye(ctx.dim)
    slack = min(min_eigenvalue(middle - left), min_eigenvalue(right - middle))
    return _check(
        'reverse_poincare', t, max_eigenvalue(left), norm_sq / scale, slack, scaled_tolerance(tol, norm_sq),
    )


def _test_set(ctx: WeightedContext, samples: int, seed: int) -> list[np.ndarray]:
    rng = instance_rng(seed, ctx.n)
    dim = ctx.dim
    pauli_z = np.diag([1.0, -1.0]).astype(complex)
    operators = [kron_all([pauli_z] + [np.eye(2)] * (ctx.n - 1))]
    for index in range(samples):
        gaussian = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2 * dim)
        operators.append(hermitian_part(gaussian) * 2 if index % 2 == 0 else gaussian)
    return operators


def _hypercontractive(ctx: WeightedContext, operators: list[np.ndarray], alpha: float) -> bool:
    for t in HYPERCONTRACTIVITY_T_GRID:
        p = 1 + math.exp(-2 * alpha * t)
        for x in operators:
            if kms_norm(ctx, weighted_semigroup(ctx, x, t), 2) > kms_norm(ctx, x, p) * (1 + 1e-12):
                return False
    return True


def best_hypercontractivity_alpha(ctx: WeightedContext, operators: list[np.ndarray], upper: float = 2.0) -> float:
    """Largest α on [0, upper] for which ‖i₂(P_t x)‖ <= ‖i_{p(t)}(x)‖ on the t-grid, by bisection."""
    if _hypercontractive(ctx, operators, upper):
        return upper
    low, high = 0.0, upper
    for _ in range(30):
        middle = (low + high) / 2
        if _hypercontractive(ctx, operators, middle):
            low = middle
        else:
            high = middle
    return low


@dataclass(frozen=True)
class AxiomReport:
    """Numerical verification of the semigroup axioms for one reference state.

    Attributes:
        checks: One worst-case report per asserted check
        hypercontractivity_alpha: Best α found on the grid, report-only
        spectral_gap: Exact gap of 𝓛_ω
        condition_number: Condition number of σ
    """

    checks: list[SemigroupCheckReport]
    hypercontractivity_alpha: float
    spectral_gap: float
    condition_number: float

    @property
    def satisfied(self) -> bool:
        return all(check.satisfied for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            'checks': [check.to_dict() for check in self.checks],
            'hypercontractivity_alpha': self.hypercontractivity_alpha,
            'spectral_gap': self.spectral_gap,
            'condition_number': self.condition_number,
            'satisfied': self.satisfied,
        }


def verify_axioms(ctx: WeightedContext, tol: float = 1e-8, samples: int = 6, seed: int = 0) -> AxiomReport:
    """Check the Dirichlet identity, gradient estimate, derivation bound, spectral gap,
    derivation decay and KMS symmetry on a random test set.

    Constants: K = 1/2, M = √2, λ = 1, μ = 1. The hypercontractivity constant α is
    reported, not asserted.

    Args:
        ctx: Weighted context with n <= 3
        tol: Relative tolerance of the inequality checks
        samples: Random operators in the test set
        seed: Seed of the test set

    Returns:
        AxiomReport

    Raises:
        ValidationError: If n > 3
    """
    if ctx.n > 3:
        raise ValidationError(f'Axiom checks are limited to n <= 3, got {ctx.n}.')
    operators = _test_set(ctx, samples, seed)
    dirichlet, gradient, derivation, poincare, decay, symmetry, reverse = [], [], [], [], [], [], []
    rng = instance_rng(seed, ctx.n, 1)

    for x in operators:
        scale = operator_norm(x) ** 2
        generated = weighted_generator(ctx, x).matrix
        derivatives = [weighted_d_j(ctx, x, j).matrix for j in range(ctx.n)]

        energy = kms_inner(ctx, x, generated)
        squares = sum(kms_inner(ctx, d, d) for d in derivatives)
        residual = abs(energy - squares)
        dirichlet.append(_check('A2-1', 0.0, energy.real, squares.real, -residual, scaled_tolerance(DIRICHLET_TOL, scale)))

        gamma = weighted_carre_du_champ(ctx, x).matrix
        largest = max(operator_norm(d) for d in derivatives)
        bound = GRADIENT_M * math.sqrt(max(operator_norm(gamma), 0.0))
        derivation.append(_check('A2-2', 0.0, largest, bound, bound - largest, scaled_tolerance(tol, bound)))

        centered = x - state_expectation(ctx, x) * np.eye(ctx.dim)
        variance = kms_inner(ctx, centered, centered).real
        poincare.append(_check('A3', 0.0, SPECTRAL_GAP * variance, energy.real, energy.real - SPECTRAL_GAP * variance, scaled_tolerance(tol, scale)))

        y = operators[int(rng.integers(len(operators)))]
        for t in AXIOM_T_GRID:
            smoothed = weighted_semigroup(ctx, x, t).matrix
            left = weighted_carre_du_champ(ctx, smoothed).matrix
            right = math.exp(-2 * GRADIENT_K * t) * weighted_semigroup(ctx, gamma, t).matrix
            gradient.append(_check('A1', t, max_eigenvalue(left), max_eigenvalue(right), min_eigenvalue(right - left), scaled_tolerance(tol, scale)))

            asymmetry = abs(kms_inner(ctx, smoothed, y) - kms_inner(ctx, x, weighted_semigroup(ctx, y, t)))
            symmetry.append(_check('kms_symmetry', t, asymmetry, 0.0, -asymmetry, scaled_tolerance(DIRICHLET_TOL, scale)))

            for j, derived in enumerate(derivatives):
                for p in AXIOM_P_GRID:
                    lhs = kms_norm(ctx, weighted_d_j(ctx, smoothed, j), p)
                    rhs = math.exp(-DERIVATION_DECAY * t) * kms_norm(ctx, derived, p)
                    decay.append(_check('A5', t, lhs, rhs, rhs - lhs, scaled_tolerance(tol, rhs), qubit=j, p=p))

            if ctx.n <= 2:
                reverse.append(reverse_poincare_check(ctx, x, t, tol=tol))

    gap = superoperator_gap(ctx)
    checks = [
        _worst(dirichlet, 'A2-1'),
        _worst(gradient, 'A1'),
        _worst(derivation, 'A2-2'),
        _worst(poincare, 'A3'),
        _check('A3-gap', 0.0, SPECTRAL_GAP, gap, gap - SPECTRAL_GAP, tol),
        _worst(decay, 'A5'),
        _worst(symmetry, 'kms_symmetry'),
    ]
    if reverse:
        checks.append(_worst(reverse, 'reverse_poincare'))
    alpha = best_hypercontractivity_alpha(ctx, operators)
    if ctx.condition_number > 1e4:
        logger.warning('Reference state is ill-conditioned: cond(sigma)=%.3g', ctx.condition_number)
    return AxiomReport(
        checks=checks, hypercontractivity_alpha=alpha, spectral_gap=gap, condition_number=ctx.condition_number,
    )


def general_poincare_l1(
    ctx: WeightedContext,
    x: DenseOperator | np.ndarray,
    K: float = GRADIENT_K,
    M: float = GRADIENT_M,
    tol: float = DEFAULT_TOLERANCES.psd,
) -> InequalityReport:
    """(√K/M) ‖i₁(x - φ(x)𝟙)‖ <= (π/2) Σ_j ‖i₁(d_j x)‖, asserted."""
    matrix = _matrix(ctx, x)
    centered = matrix - state_expectation(ctx, matrix) * np.eye(ctx.dim)
    lhs = math.sqrt(K) / M * kms_norm(ctx, centered, 1)
    influence = sum(kms_norm(ctx, weighted_d_j(ctx, matrix, j), 1) for j in range(ctx.n))
    return _inequality(
        'general_poincare_l1', lhs, math.pi / 2 * influence, asserted=True, tol=tol,
        values={'K': K, 'M': M, 'influence': influence},
        metadata={'n': ctx.n},
    )


def general_talagrand_l1(
    ctx: WeightedContext,
    x: DenseOperator | np.ndarray,
    tol: float = DEFAULT_TOLERANCES.psd,
) -> InequalityReport:
    """‖i₂(x - φ(x)𝟙)‖² against Σ_j a_j(1+a_j)/(1+log⁺(1/a_j))^{1/2}, a_j = ‖i₁(d_j x)‖; report-only."""
    matrix = _matrix(ctx, x)
    norm = operator_norm(matrix)
    scale = 1.0
    if norm > 1 + tol:
        scale = 1.0 / norm
        logger.warning('Rescaling operator with norm %.6g to norm 1 for the weighted Talagrand bound', norm)
        matrix = matrix * scale
    centered = matrix - state_expectation(ctx, matrix) * np.eye(ctx.dim)
    lhs = kms_inner(ctx, centered, centered).real
    rhs = sum(talagrand_term(kms_norm(ctx, weighted_d_j(ctx, matrix, j), 1)) for j in range(ctx.n))
    return _inequality(
        'general_talagrand_l1', lhs, rhs, asserted=False, tol=tol,
        values={'scale': scale}, metadata={'n': ctx.n},
    )
