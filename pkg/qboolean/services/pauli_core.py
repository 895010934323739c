"""Pauli-Fourier and dense representations of n-qubit operators.

Coefficients follow Â_s = 2⁻ⁿ tr(σ_s A); norms are normalized so that ‖𝟙‖_p = 1.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

import numpy as np

from qboolean.exceptions import DimensionError, ValidationError
from qboolean.models import (
    DEFAULT_TOLERANCES,
    DENSE_MAX_QUBITS,
    BooleanCheck,
    DenseOperator,
    FourierOperator,
    NormValue,
    PauliString,
)
from qboolean.utils.helpers import kron_all, operator_norm, singular_values

Operator = Union[DenseOperator, FourierOperator]

PAULI_MATRICES: tuple[np.ndarray, ...] = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# Site maps between the vectorized 2x2 block (index 2r + c) and Pauli letters
_TO_FOURIER = np.array(
    [[sigma[c, r] / 2 for r in range(2) for c in range(2)] for sigma in PAULI_MATRICES]
)
_TO_DENSE = np.array(
    [[sigma[r, c] for sigma in PAULI_MATRICES] for r in range(2) for c in range(2)]
)


def _apply_site_map(tensor: np.ndarray, site_map: np.ndarray) -> np.ndarray:
    for axis in range(tensor.ndim):
        tensor = np.moveaxis(np.tensordot(site_map, tensor, axes=([1], [axis])), 0, axis)
    return tensor


def pauli_matrix(s: PauliString | str) -> DenseOperator:
    """Dense matrix of σ_s.

    Args:
        s: Pauli string or its base-4 label

    Returns:
        The Kronecker product of the single-qubit Pauli matrices
    """
    s = s if isinstance(s, PauliString) else PauliString.from_label(s)
    return DenseOperator(s.n, kron_all([PAULI_MATRICES[letter] for letter in s.word]))


def to_fourier(A: DenseOperator, dense_max_qubits: int = DENSE_MAX_QUBITS) -> FourierOperator:
    """Pauli coefficients Â_s = 2⁻ⁿ tr(σ_s A).

    Args:
        A: Dense operator
        dense_max_qubits: Largest n stored densely

    Returns:
        FourierOperator

    Raises:
        DimensionError: If A is not a DenseOperator of consistent shape
    """
    if not isinstance(A, DenseOperator):
        raise DimensionError(f'Expected a DenseOperator, got {type(A).__name__}.')
    n = A.n
    tensor = A.matrix.reshape([2] * (2 * n))
    interleaved = [axis for j in range(n) for axis in (j, n + j)]
    tensor = tensor.transpose(interleaved).reshape([4] * n)
    coefficients = _apply_site_map(tensor, _TO_FOURIER)
    return FourierOperator.from_vector(n, coefficients.ravel(), dense_max_qubits)


def to_dense(F: FourierOperator) -> DenseOperator:
    """Dense matrix A = Σ_s Â_s σ_s."""
    n = F.n
    tensor = _apply_site_map(F.to_vector().reshape([4] * n), _TO_DENSE)
    tensor = tensor.reshape([2] * (2 * n))
    rows_then_columns = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    return DenseOperator(n, tensor.transpose(rows_then_columns).reshape(2 ** n, 2 ** n))


def ensure_fourier(A: Operator) -> FourierOperator:
    return A if isinstance(A, FourierOperator) else to_fourier(A)


def ensure_dense(A: Operator) -> DenseOperator:
    return A if isinstance(A, DenseOperator) else to_dense(A)


def _check_same_n(A: Operator, B: Operator) -> None:
    if A.n != B.n:
        raise DimensionError(f'Operators act on {A.n} and {B.n} qubits.')


def schatten_norm(A: Operator, p: float) -> NormValue:
    """Normalized Schatten norm (2⁻ⁿ tr|A|^p)^{1/p}; p = inf gives the operator norm.

    Args:
        A: Operator
        p: Exponent, at least 1, or math.inf

    Returns:
        NormValue

    Raises:
        ValidationError: If p < 1
    """
    if not p >= 1:
        raise ValidationError(f'Schatten exponent must be >= 1, got {p}.')
    values = singular_values(ensure_dense(A).matrix)
    if math.isinf(p):
        return NormValue(p, float(np.max(values, initial=0.0)))
    return NormValue(p, float(np.mean(values ** p) ** (1.0 / p)))


def inner(A: Operator, B: Operator) -> complex:
    """Normalized Hilbert-Schmidt inner product 2⁻ⁿ tr(A* B).

    Raises:
        DimensionError: If A and B act on different qubit counts
    """
    _check_same_n(A, B)
    if isinstance(A, FourierOperator) and isinstance(B, FourierOperator):
        return complex(np.vdot(A.to_vector(), B.to_vector()))
    a, b = ensure_dense(A), ensure_dense(B)
    return complex(np.vdot(a.matrix, b.matrix) / a.dim)


def normalized_trace(A: Operator) -> complex:
    """2⁻ⁿ tr(A), the coefficient of the identity string."""
    if isinstance(A, FourierOperator):
        return A.coefficient(PauliString((0,) * A.n))
    return complex(np.trace(A.matrix) / A.dim)


def variance(A: Operator) -> float:
    """Var(A) = ‖A - 2⁻ⁿtr(A)𝟙‖₂² = Σ_{s≠0} |Â_s|²."""
    F = ensure_fourier(A)
    total = float(np.sum(np.abs(F.values) ** 2))
    return max(total - abs(normalized_trace(F)) ** 2, 0.0)


def is_quantum_boolean(A: Operator, tol: float = DEFAULT_TOLERANCES.qbf) -> BooleanCheck:
    """Test A = A* and A² = 𝟙 in operator norm.

    Args:
        A: Operator
        tol: Residual allowed in both conditions

    Returns:
        BooleanCheck with both residuals
    """
    matrix = ensure_dense(A).matrix
    hermitian_residual = operator_norm(matrix - matrix.conj().T)
    square_residual = operator_norm(matrix @ matrix - np.eye(matrix.shape[0]))
    return BooleanCheck(
        is_boolean=hermitian_residual <= tol and square_residual <= tol,
        hermitian_residual=hermitian_residual,
        square_residual=square_residual,
    )


def is_balanced(A: Operator, tol: float = DEFAULT_TOLERANCES.qbf) -> bool:
    return abs(normalized_trace(A)) <= tol


def support_of(F: Operator, tol: float = DEFAULT_TOLERANCES.support) -> frozenset[int]:
    """Union of supp(s) over coefficients with |Â_s| > tol."""
    F = ensure_fourier(F)
    significant = np.abs(F.values) > tol
    if not np.any(significant):
        return frozenset()
    touched = np.any(F.digits()[significant] != 0, axis=0)
    return frozenset(int(j) for j in np.flatnonzero(touched))


def validate_qubits(qubits: Iterable[int], n: int) -> frozenset[int]:
    """Check qubit indices lie in [0, n).

    Raises:
        ValidationError: On an out-of-range index
    """
    qubits = frozenset(int(j) for j in qubits)
    bad = sorted(j for j in qubits if not 0 <= j < n)
    if bad:
        raise ValidationError(f'Qubit indices {bad} out of range for n={n}.')
    return qubits


def partial_average(F: Operator, T: Iterable[int]) -> FourierOperator:
    """2^{-|T|} tr_T(A) ⊗ 𝟙_T: zero every coefficient whose support meets T.

    Args:
        F: Operator
        T: Qubits to average out

    Returns:
        FourierOperator with the same storage layout

    Raises:
        ValidationError: If T contains an invalid index
    """
    F = ensure_fourier(F)
    T = sorted(validate_qubits(T, F.n))
    if not T:
        return F
    untouched = np.all(F.digits()[:, T] == 0, axis=1)
    return F.with_values(np.where(untouched, F.values, 0))
