"""Deterministic and random generators of test operators."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np
from scipy import linalg

from qboolean.exceptions import NotQuantumBooleanError, ValidationError
from qboolean.models import (
    DEFAULT_TOLERANCES,
    CommutatorBound,
    DenseOperator,
    EnsembleSpec,
    Family,
    FourierOperator,
    PauliString,
)
from qboolean.services.influence import d_j
from qboolean.services.pauli_core import (
    Operator,
    ensure_dense,
    ensure_fourier,
    pauli_matrix,
    to_dense,
    to_fourier,
    validate_qubits,
)
from qboolean.utils.helpers import instance_rng, is_hermitian_matrix, operator_norm

FAMILY_CODES: dict[Family, int] = {family: code for code, family in enumerate(Family)}
BOOLEAN_DEGREES = (1, 2)


def _hypercube(n: int) -> np.ndarray:
    """Rows x ∈ {±1}ⁿ in basis order; bit b of qubit j maps to x_j = (-1)^b."""
    bits = (np.arange(2 ** n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    return 1 - 2 * bits


def classical_embed(f: Sequence[int] | np.ndarray) -> FourierOperator:
    """Diagonal operator with entries f(x).

    Args:
        f: Truth table of length 2ⁿ with values ±1, indexed by basis state

    Returns:
        FourierOperator supported on s ∈ {0,3}ⁿ

    Raises:
        ValidationError: If the length is not a power of two or a value is not ±1
    """
    f = np.asarray(f, dtype=float).ravel()
    n = int(round(np.log2(f.size))) if f.size else 0
    if n < 1 or 2 ** n != f.size:
        raise ValidationError(f'Truth table length must be 2^n with n >= 1, got {f.size}.')
    if not np.all(np.isin(f, (-1.0, 1.0))):
        raise ValidationError('Truth table values must be +1 or -1.')
    return to_fourier(DenseOperator(n, np.diag(f)))


def dictator(n: int, site: int = 0) -> np.ndarray:
    if not 0 <= site < n:
        raise ValidationError(f'Dictator site {site} out of range for n={n}.')
    return _hypercube(n)[:, site]


def parity(n: int) -> np.ndarray:
    return np.prod(_hypercube(n), axis=1)


def majority(n: int) -> np.ndarray:
    """Majority of x ∈ {±1}ⁿ.

    Raises:
        ValidationError: If n is even
    """
    if n % 2 == 0:
        raise ValidationError(f'Majority needs odd n, got {n}.')
    return np.sign(np.sum(_hypercube(n), axis=1))


def tribes(n: int, width: int) -> np.ndarray:
    """OR of ANDs over consecutive blocks; -1 encodes true.

    Raises:
        ValidationError: If width does not divide n
    """
    if width < 1 or n % width != 0:
        raise ValidationError(f'Tribes width {width} must divide n={n}.')
    cube = _hypercube(n).reshape(2 ** n, n // width, width)
    any_tribe_true = np.any(np.all(cube == -1, axis=2), axis=1)
    return np.where(any_tribe_true, -1, 1)


def selector(n: int, control: int, first: int, second: int) -> np.ndarray:
    """x_first when x_control = 1, else x_second; a degree-2 Boolean function."""
    cube = _hypercube(n)
    return np.where(cube[:, control] == 1, cube[:, first], cube[:, second])


def haar_isometry(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """dim×rank matrix with Haar-distributed orthonormal columns."""
    gaussian = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))) / np.sqrt(2)
    q, r = linalg.qr(gaussian, mode='economic')
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_projector(n: int, rank: int, rng: np.random.Generator) -> DenseOperator:
    """Haar-random rank-`rank` orthogonal projector.

    Raises:
        ValidationError: If rank is outside [0, 2ⁿ]
    """
    dim = 2 ** n
    if not 0 <= rank <= dim:
        raise ValidationError(f'Rank {rank} outside [0, {dim}].')
    if rank == 0:
        return DenseOperator(n, np.zeros((dim, dim)))
    if rank == dim:
        return DenseOperator.identity(n)
    q = haar_isometry(dim, rank, rng)
    projector = q @ q.conj().T
    return DenseOperator(n, (projector + projector.conj().T) / 2)


def random_qbf(n: int, rank: int, seed: int | np.random.Generator) -> DenseOperator:
    """A = 2P - 𝟙 for a Haar-random rank-`rank` projector P.

    Balanced exactly when rank = 2^{n-1}.

    Args:
        n: Number of qubits
        rank: Rank of P
        seed: Seed or generator

    Returns:
        Quantum Boolean DenseOperator

    Raises:
        ValidationError: If rank is outside [0, 2ⁿ]
    """
    rng = seed if isinstance(seed, np.random.Generator) else instance_rng(seed)
    projector = random_projector(n, rank, rng)
    return DenseOperator(n, 2 * projector.matrix - np.eye(2 ** n))


def random_hermitian(n: int, rng: np.random.Generator) -> DenseOperator:
    """GUE matrix scaled so its operator norm is of order 1."""
    dim = 2 ** n
    gaussian = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return DenseOperator(n, (gaussian + gaussian.conj().T) / (2 * np.sqrt(2 * dim)))


def random_matrix(n: int, rng: np.random.Generator) -> DenseOperator:
    """Non-Hermitian complex Gaussian matrix."""
    dim = 2 ** n
    return DenseOperator(n, (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2 * dim))


def degree_strings(n: int, d: int) -> list[PauliString]:
    """All Pauli strings of weight at most d, in index order."""
    strings = []
    for weight in range(min(d, n) + 1):
        for sites in itertools.combinations(range(n), weight):
            for letters in itertools.product((1, 2, 3), repeat=weight):
                word = [0] * n
                for site, letter in zip(sites, letters):
                    word[site] = letter
                strings.append(PauliString(tuple(word)))
    return sorted(strings)


def random_low_degree(n: int, d: int, rng: np.random.Generator, diagonal: bool = False) -> FourierOperator:
    """Random Hermitian operator of degree at most d with Gaussian coefficients.

    With diagonal=True only letters 0 and 3 are used.
    """
    strings = [s for s in degree_strings(n, d) if not diagonal or set(s.word) <= {0, 3}]
    values = rng.standard_normal(len(strings))
    return FourierOperator.from_coefficients(n, dict(zip(strings, values)))


def random_low_degree_boolean(n: int, d: int, rng: np.random.Generator) -> FourierOperator:
    """Random diagonal quantum Boolean function of degree at most d (d <= 2).

    Draws a signed dictator (d = 1), or a signed 2-parity or selector (d = 2) on
    randomly chosen qubits.

    Raises:
        ValidationError: If d is not 1 or 2 or n is too small
    """
    if d not in BOOLEAN_DEGREES:
        raise ValidationError(f'Boolean low-degree draws support d in {BOOLEAN_DEGREES}, got {d}.')
    sign = rng.choice((-1, 1))
    if d == 1 or n < 2:
        return classical_embed(sign * dictator(n, int(rng.integers(n))))
    if n < 3 or rng.random() < 0.3:
        first, second = rng.choice(n, size=2, replace=False)
        cube = _hypercube(n)
        return classical_embed(sign * cube[:, first] * cube[:, second])
    control, first, second = (int(x) for x in rng.choice(n, size=3, replace=False))
    return classical_embed(sign * selector(n, control, first, second))


def embed_junta(F: Operator, sites: Sequence[int], n: int) -> FourierOperator:
    """Place a k-qubit operator on `sites` of an n-qubit register, identity elsewhere.

    Raises:
        ValidationError: If the sites are repeated, out of range or not k in number
    """
    F = ensure_fourier(F)
    sites = [int(site) for site in sites]
    if len(sites) != F.n or len(validate_qubits(sites, n)) != F.n:
        raise ValidationError(f'Need {F.n} distinct sites in [0, {n}), got {sites}.')
    coeffs = {}
    for s, value in F.items():
        word = [0] * n
        for site, letter in zip(sites, s.word):
            word[site] = letter
        coeffs[PauliString(tuple(word))] = value
    return FourierOperator.from_coefficients(n, coeffs)


def random_junta_qbf(n: int, k: int, rng: np.random.Generator) -> FourierOperator:
    """Balanced random quantum Boolean k-junta on randomly chosen qubits."""
    if not 1 <= k <= n:
        raise ValidationError(f'Need 1 <= k <= n, got k={k}, n={n}.')
    sites = sorted(int(site) for site in rng.choice(n, size=k, replace=False))
    return embed_junta(to_fourier(random_qbf(k, 2 ** (k - 1), rng)), sites, n)


def local_term(n: int, factors: dict[int, int], coefficient: float) -> DenseOperator:
    """coefficient · σ with the given {site: letter} factors."""
    word = [0] * n
    for site, letter in factors.items():
        word[site] = letter
    return pauli_matrix(PauliString(tuple(word))) * coefficient


def heisenberg_chain(n: int, jx: float = 1.0, jz: float = 1.0, h: float = 0.5) -> list[DenseOperator]:
    """Nearest-neighbour terms jx(XX + YY) + jz ZZ and a transverse field h X."""
    terms = []
    for site in range(n - 1):
        terms.append(local_term(n, {site: 1, site + 1: 1}, jx))
        terms.append(local_term(n, {site: 2, site + 1: 2}, jx))
        terms.append(local_term(n, {site: 3, site + 1: 3}, jz))
    for site in range(n):
        terms.append(local_term(n, {site: 1}, h))
    return terms


def evolved_pauli(
    n: int,
    hamiltonian: Sequence[Operator],
    t: float,
    site: int,
    pauli_index: int,
    tol: float = DEFAULT_TOLERANCES.qbf,
) -> DenseOperator:
    """e^{itH} σ e^{-itH} for the single-site Pauli σ = σ_{pauli_index} at `site`.

    Args:
        n: Number of qubits, at most 10
        hamiltonian: Hermitian terms summed into H
        t: Evolution time
        site: Qubit carrying the Pauli
        pauli_index: Letter in {1, 2, 3}
        tol: Hermiticity tolerance for the terms

    Returns:
        Quantum Boolean DenseOperator

    Raises:
        ValidationError: On an invalid size, site or letter
        NotQuantumBooleanError: If a term is not Hermitian
    """
    if not 1 <= n <= 10:
        raise ValidationError(f'Evolution supports 1 <= n <= 10, got {n}.')
    if pauli_index not in (1, 2, 3):
        raise ValidationError(f'Pauli letter must be 1, 2 or 3, got {pauli_index}.')
    bare = pauli_matrix(PauliString.single(n, site, pauli_index)).matrix
    H = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for term in hamiltonian:
        matrix = ensure_dense(term).matrix
        if matrix.shape != H.shape:
            raise ValidationError(f'Hamiltonian term has shape {matrix.shape}, expected {H.shape}.')
        if not is_hermitian_matrix(matrix, tol):
            raise NotQuantumBooleanError('Hamiltonian terms must be Hermitian.')
        H += matrix
    w, v = linalg.eigh((H + H.conj().T) / 2)
    unitary = (v * np.exp(-1j * t * w)) @ v.conj().T
    return DenseOperator(n, unitary.conj().T @ bare @ unitary)


def commutator_influence_bound(A: Operator, j: int, tol: float = DEFAULT_TOLERANCES.psd) -> CommutatorBound:
    """Compare ‖d_jA‖_∞ with a quarter of the commutator norms at site j."""
    A = ensure_dense(A)
    lhs = operator_norm(to_dense(d_j(A, j)).matrix)
    rhs = 0.0
    for letter in (1, 2, 3):
        sigma = pauli_matrix(PauliString.single(A.n, j, letter)).matrix
        rhs += operator_norm(A.matrix @ sigma - sigma @ A.matrix) / 4
    return CommutatorBound(lhs=lhs, rhs=rhs, satisfied=lhs <= rhs + tol * max(1.0, rhs))


def build(spec: EnsembleSpec, index: int = 0) -> DenseOperator | FourierOperator:
    """Materialize element `index` of an ensemble.

    The element depends only on (spec, index): its generator is keyed by the
    family code, n and index.

    Raises:
        ValidationError: On missing or invalid family parameters
    """
    n, params = spec.n, spec.params
    rng = instance_rng(spec.seed, FAMILY_CODES[spec.family], n, index)
    if spec.family is Family.DICTATOR:
        return classical_embed(dictator(n, int(params.get('site', 0))))
    if spec.family is Family.PARITY:
        return classical_embed(parity(n))
    if spec.family is Family.MAJORITY:
        return classical_embed(majority(n))
    if spec.family is Family.TRIBES:
        return classical_embed(tribes(n, int(params.get('width', 2))))
    if spec.family is Family.CLASSICAL_CUSTOM:
        if 'truth_table' not in params:
            raise ValidationError('classical_custom needs a truth_table parameter.')
        return classical_embed(params['truth_table'])
    if spec.family is Family.RANDOM_QBF:
        return random_qbf(n, int(params.get('rank', 2 ** (n - 1))), rng)
    if spec.family is Family.RANDOM_HERMITIAN:
        return random_hermitian(n, rng)
    if spec.family is Family.RANDOM_PROJECTOR:
        return random_projector(n, int(params.get('rank', int(rng.integers(0, 2 ** n + 1)))), rng)
    chain = heisenberg_chain(n, float(params.get('jx', 1.0)), float(params.get('jz', 1.0)), float(params.get('h', 0.5)))
    return evolved_pauli(
        n, chain, float(params.get('time', 1.0)), int(params.get('site', n // 2)), int(params.get('pauli', 3)),
    )


def sample(spec: EnsembleSpec, count: int) -> Iterator[DenseOperator | FourierOperator]:
    """Elements 0..count-1 of the ensemble."""
    for index in range(count):
        yield build(spec, index)
