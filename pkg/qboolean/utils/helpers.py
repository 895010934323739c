"""Spectral and numerical helper functions."""

from __future__ import annotations

import math
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

HERMITIAN_TOL = 1e-12


def kron_all(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of the matrices, leftmost factor most significant."""
    return reduce(np.kron, matrices)


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


def is_hermitian_matrix(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tol * max(1.0, np.max(np.abs(matrix), initial=0.0)))


def matrix_function(matrix: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply `fn` to the spectrum of the Hermitian part of `matrix`.

    Args:
        matrix: Square matrix, assumed Hermitian up to rounding
        fn: Vectorized function of the eigenvalues

    Returns:
        V diag(fn(w)) V*
    """
    w, v = linalg.eigh(hermitian_part(matrix))
    return (v * fn(w)) @ v.conj().T


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues below zero from rounding are clipped."""
    return matrix_function(matrix, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def min_eigenvalue(matrix: np.ndarray) -> float:
    return float(linalg.eigvalsh(hermitian_part(matrix))[0])


def max_eigenvalue(matrix: np.ndarray) -> float:
    return float(linalg.eigvalsh(hermitian_part(matrix))[-1])


def singular_values(matrix: np.ndarray) -> np.ndarray:
    """Singular values; |eigenvalues| through eigh for Hermitian input, SVD otherwise."""
    if is_hermitian_matrix(matrix):
        return np.abs(linalg.eigvalsh(hermitian_part(matrix)))
    return linalg.svdvals(matrix)


def operator_norm(matrix: np.ndarray) -> float:
    return float(np.max(singular_values(matrix), initial=0.0))


def log_plus(x: float) -> float:
    """max(log x, 0), with log_plus(inf) = inf."""
    if x <= 1.0:
        return 0.0
    return math.log(x)


def scaled_tolerance(tol: float, scale: float) -> float:
    """Tolerance relative to the magnitude of the quantities compared."""
    return tol * max(1.0, abs(scale))


def site_expectation(
    matrix: np.ndarray,
    n: int,
    site: int,
    weight: np.ndarray | None = None,
) -> np.ndarray:
    """Replace the tensor factor at `site` by 𝟙 ⊗ tr(ω ·).

    With the default weight ω = 𝟙/2 this is the partial average over one qubit.

    Args:
        matrix: 2ⁿ×2ⁿ matrix
        n: Number of qubits
        site: Qubit index
        weight: 2×2 density matrix ω

    Returns:
        The 2ⁿ×2ⁿ matrix 𝟙_site ⊗ tr_site((ω_site ⊗ 𝟙) X)
    """
    if weight is None:
        weight = np.eye(2) / 2
    tensor = np.asarray(matrix).reshape([2] * (2 * n))
    # tr(ω x) = Σ_ab ω_ba x_ab: row axis pairs with ω's column, column axis with ω's row
    reduced = np.tensordot(tensor, weight, axes=([site, n + site], [1, 0]))
    expanded = np.multiply.outer(reduced, np.eye(2))
    expanded = np.moveaxis(expanded, [-2, -1], [site, n + site])
    return expanded.reshape(2 ** n, 2 ** n)


def instance_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for one ensemble element.

    The stream depends only on (seed, keys), so element i is reproducible without
    generating elements 0..i-1.

    Args:
        seed: Root seed
        keys: Nonnegative integers identifying the element (family code, n, index)

    Returns:
        numpy Generator backed by Philox
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))
