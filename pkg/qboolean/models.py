"""Domain models for Fourier analysis of n-qubit operators."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Iterator, Mapping

import numpy as np

from qboolean.exceptions import DimensionError, ValidationError

PAULI_ALPHABET = '0123'
DENSE_MAX_QUBITS = 7


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by every service.

    Attributes:
        support: Coefficients with modulus at or below this are outside the support
        psd: Relative slack allowed on PSD orderings and scalar inequalities
        qbf: Residual allowed in the Hermitian and A² = 𝟙 checks
        roundtrip: Entrywise error allowed on dense/Fourier round trips
    """

    support: float = 1e-10
    psd: float = 1e-9
    qbf: float = 1e-10
    roundtrip: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True, order=True)
class PauliString:
    """A base-4 word s selecting the tensor product σ_{s_0} ⊗ ... ⊗ σ_{s_{n-1}}.

    Attributes:
        word: Letters in {0, 1, 2, 3}; qubit 0 is the leftmost tensor factor
    """

    word: tuple[int, ...]

    def __post_init__(self) -> None:
        word = tuple(int(letter) for letter in self.word)
        if not word:
            raise ValidationError('Pauli string must act on at least one qubit.')
        if any(letter not in (0, 1, 2, 3) for letter in word):
            raise ValidationError(f'Pauli letters must lie in {{0,1,2,3}}, got {word}.')
        object.__setattr__(self, 'word', word)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse a base-4 label such as '0312'.

        Args:
            label: String over the alphabet '0123'

        Returns:
            Parsed PauliString

        Raises:
            ValidationError: If the label contains other characters
        """
        if not label or any(c not in PAULI_ALPHABET for c in label):
            raise ValidationError(f"Invalid Pauli label '{label}'.")
        return cls(tuple(int(c) for c in label))

    @classmethod
    def from_index(cls, index: int, n: int) -> PauliString:
        """Build the string whose base-4 numeral is `index`."""
        if not 0 <= index < 4 ** n:
            raise ValidationError(f'Index {index} out of range for n={n}.')
        return cls(tuple((index // 4 ** (n - 1 - j)) % 4 for j in range(n)))

    @classmethod
    def single(cls, n: int, site: int, letter: int) -> PauliString:
        """The string acting as σ_letter on `site` and as identity elsewhere."""
        if not 0 <= site < n:
            raise ValidationError(f'Qubit {site} out of range for n={n}.')
        word = [0] * n
        word[site] = letter
        return cls(tuple(word))

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def label(self) -> str:
        return ''.join(str(letter) for letter in self.word)

    @property
    def index(self) -> int:
        return int(self.label, 4)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(j for j, letter in enumerate(self.word) if letter)

    @property
    def weight(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        return self.label


def base4_digits(indices: np.ndarray, n: int) -> np.ndarray:
    """Return the (m, n) array of base-4 digits of the given coefficient indices."""
    powers = 4 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (np.asarray(indices, dtype=np.int64)[:, None] // powers) % 4


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FourierOperator:
    """An operator stored by its Pauli coefficients Â_s.

    Dense storage keeps all 4ⁿ coefficients in index order. Sparse storage keeps
    parallel arrays of indices and values; omitted indices are zero.

    Attributes:
        n: Number of qubits
        values: Complex coefficients
        indices: Sorted coefficient indices for sparse storage, None when dense
    """

    n: int
    values: np.ndarray
    indices: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionError(f'Operator needs n >= 1 qubits, got {self.n}.')
        values = np.asarray(self.values, dtype=complex).ravel()
        if self.indices is None:
            if values.shape[0] != 4 ** self.n:
                raise DimensionError(
                    f'Dense coefficient vector must have length 4^{self.n}, got {values.shape[0]}.'
                )
        else:
            indices = np.asarray(self.indices, dtype=np.int64).ravel()
            if indices.shape != values.shape:
                raise DimensionError('Sparse indices and values must have equal length.')
            order = np.argsort(indices, kind='stable')
            indices, values = indices[order], values[order]
            if indices.size and (indices[0] < 0 or indices[-1] >= 4 ** self.n):
                raise ValidationError('Sparse index out of range.')
            if np.any(np.diff(indices) == 0):
                raise ValidationError('Sparse indices must be unique.')
            object.__setattr__(self, 'indices', _frozen(indices))
        object.__setattr__(self, 'values', _frozen(values))

    @classmethod
    def from_vector(
        cls,
        n: int,
        vector: np.ndarray,
        dense_max_qubits: int = DENSE_MAX_QUBITS,
    ) -> FourierOperator:
        """Wrap a full 4ⁿ coefficient vector, choosing storage by qubit count.

        Args:
            n: Number of qubits
            vector: Coefficients in index order
            dense_max_qubits: Largest n stored densely

        Returns:
            FourierOperator with dense or sparse storage
        """
        vector = np.asarray(vector, dtype=complex).ravel()
        if n <= dense_max_qubits:
            return cls(n, vector)
        nonzero = np.flatnonzero(vector)
        return cls(n, vector[nonzero], nonzero)

    @classmethod
    def from_coefficients(
        cls,
        n: int,
        coeffs: Mapping[PauliString | str, complex],
        dense_max_qubits: int = DENSE_MAX_QUBITS,
    ) -> FourierOperator:
        """Build an operator from a map of Pauli strings (or labels) to coefficients.

        Raises:
            DimensionError: If a string does not act on n qubits
        """
        indices: list[int] = []
        values: list[complex] = []
        for key, value in coeffs.items():
            s = key if isinstance(key, PauliString) else PauliString.from_label(key)
            if s.n != n:
                raise DimensionError(f'Pauli string {s} does not act on {n} qubits.')
            indices.append(s.index)
            values.append(complex(value))
        if n <= dense_max_qubits:
            vector = np.zeros(4 ** n, dtype=complex)
            np.add.at(vector, np.asarray(indices, dtype=np.int64), np.asarray(values, dtype=complex))
            return cls(n, vector)
        merged: dict[int, complex] = {}
        for index, value in zip(indices, values):
            merged[index] = merged.get(index, 0j) + value
        keys = sorted(merged)
        return cls(n, np.array([merged[k] for k in keys], dtype=complex), np.array(keys, dtype=np.int64))

    @classmethod
    def identity(cls, n: int) -> FourierOperator:
        return cls.from_coefficients(n, {PauliString((0,) * n): 1.0})

    @classmethod
    def zero(cls, n: int) -> FourierOperator:
        return cls.from_coefficients(n, {})

    @property
    def is_dense(self) -> bool:
        return self.indices is None

    @property
    def stored_indices(self) -> np.ndarray:
        if self.indices is None:
            return np.arange(4 ** self.n, dtype=np.int64)
        return self.indices

    def digits(self) -> np.ndarray:
        """Base-4 digits of every stored coefficient, shape (m, n)."""
        return base4_digits(self.stored_indices, self.n)

    def weights(self) -> np.ndarray:
        """|supp(s)| of every stored coefficient."""
        return np.count_nonzero(self.digits(), axis=1)

    def with_values(self, values: np.ndarray) -> FourierOperator:
        """Same storage layout, new coefficient values."""
        return FourierOperator(self.n, values, self.indices)

    def coefficient(self, s: PauliString | str) -> complex:
        s = s if isinstance(s, PauliString) else PauliString.from_label(s)
        if s.n != self.n:
            raise DimensionError(f'Pauli string {s} does not act on {self.n} qubits.')
        if self.indices is None:
            return complex(self.values[s.index])
        position = np.searchsorted(self.indices, s.index)
        if position < self.indices.size and self.indices[position] == s.index:
            return complex(self.values[position])
        return 0j

    def items(self, tol: float = 0.0) -> Iterator[tuple[PauliString, complex]]:
        """Iterate over (s, Â_s) with |Â_s| > tol in index order."""
        for index, value in zip(self.stored_indices, self.values):
            if abs(value) > tol:
                yield PauliString.from_index(int(index), self.n), complex(value)

    def to_vector(self) -> np.ndarray:
        """All 4ⁿ coefficients in index order."""
        if self.indices is None:
            return np.array(self.values)
        vector = np.zeros(4 ** self.n, dtype=complex)
        vector[self.indices] = self.values
        return vector

    def norm_l2(self) -> float:
        """Normalized 2-norm via Parseval."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def degree(self, tol: float = 0.0) -> int:
        """Largest |supp(s)| over coefficients with |Â_s| > tol (0 for the zero operator)."""
        mask = np.abs(self.values) > tol
        if not np.any(mask):
            return 0
        return int(np.max(self.weights()[mask]))

    def _combine(self, other: FourierOperator, sign: float) -> FourierOperator:
        if other.n != self.n:
            raise DimensionError(f'Cannot combine operators on {self.n} and {other.n} qubits.')
        threshold = self.n if self.is_dense else self.n - 1
        return FourierOperator.from_vector(self.n, self.to_vector() + sign * other.to_vector(), threshold)

    def __add__(self, other: FourierOperator) -> FourierOperator:
        return self._combine(other, 1.0)

    def __sub__(self, other: FourierOperator) -> FourierOperator:
        return self._combine(other, -1.0)

    def __neg__(self) -> FourierOperator:
        return self.with_values(-self.values)

    def __mul__(self, scalar: complex) -> FourierOperator:
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def to_dict(self, tol: float = 0.0) -> dict[str, Any]:
        """Serialize to the operator file format."""
        return {
            'n': self.n,
            'coeffs': [
                {'s': s.label, 're': value.real, 'im': value.imag}
                for s, value in self.items(tol)
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], dense_max_qubits: int = DENSE_MAX_QUBITS) -> FourierOperator:
        """Parse the operator file format.

        Raises:
            ValidationError: If fields are missing or malformed
        """
        try:
            n = int(data['n'])
            entries = data['coeffs']
            coeffs: dict[PauliString, complex] = {}
            for entry in entries:
                s = PauliString.from_label(str(entry['s']))
                if s in coeffs:
                    raise ValidationError(f'Duplicate Pauli string {s}.')
                coeffs[s] = complex(float(entry.get('re', 0.0)), float(entry.get('im', 0.0)))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f'Malformed operator data: {e}') from e
        return cls.from_coefficients(n, coeffs, dense_max_qubits)

    def __repr__(self) -> str:
        storage = 'dense' if self.is_dense else f'sparse[{self.values.size}]'
        return f'<FourierOperator n={self.n} {storage}>'


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A 2ⁿ×2ⁿ complex matrix.

    Attributes:
        n: Number of qubits
        matrix: Matrix entries; qubit 0 is the most significant tensor factor
    """

    n: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** self.n
        if self.n < 1 or matrix.shape != (dim, dim):
            raise DimensionError(f'Expected a {dim}x{dim} matrix for n={self.n}, got {matrix.shape}.')
        object.__setattr__(self, 'matrix', _frozen(matrix))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> DenseOperator:
        """Wrap a square matrix whose side is a power of two.

        Raises:
            DimensionError: If the matrix is not 2ⁿ×2ⁿ
        """
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f'Expected a square matrix, got shape {matrix.shape}.')
        n = int(round(math.log2(matrix.shape[0]))) if matrix.shape[0] > 0 else 0
        return cls(n, matrix)

    @classmethod
    def identity(cls, n: int) -> DenseOperator:
        return cls(n, np.eye(2 ** n, dtype=complex))

    @property
    def dim(self) -> int:
        return 2 ** self.n

    @property
    def adjoint(self) -> DenseOperator:
        return DenseOperator(self.n, self.matrix.conj().T)

    def is_hermitian(self, tol: float = DEFAULT_TOLERANCES.qbf) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) <= tol)

    def _check(self, other: DenseOperator) -> None:
        if other.n != self.n:
            raise DimensionError(f'Cannot combine operators on {self.n} and {other.n} qubits.')

    def __matmul__(self, other: DenseOperator) -> DenseOperator:
        self._check(other)
        return DenseOperator(self.n, self.matrix @ other.matrix)

    def __add__(self, other: DenseOperator) -> DenseOperator:
        self._check(other)
        return DenseOperator(self.n, self.matrix + other.matrix)

    def __sub__(self, other: DenseOperator) -> DenseOperator:
        self._check(other)
        return DenseOperator(self.n, self.matrix - other.matrix)

    def __neg__(self) -> DenseOperator:
        return DenseOperator(self.n, -self.matrix)

    def __mul__(self, scalar: complex) -> DenseOperator:
        return DenseOperator(self.n, self.matrix * scalar)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f'<DenseOperator n={self.n}>'


@dataclass(frozen=True)
class NormValue:
    """A normalized Schatten norm value.

    Attributes:
        p: Exponent, a real at least 1 or math.inf
        value: Nonnegative norm
    """

    p: float
    value: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class BooleanCheck:
    """Outcome of a quantum Boolean test with the residuals it was decided on."""

    is_boolean: bool
    hermitian_residual: float
    square_residual: float

    def __bool__(self) -> bool:
        return self.is_boolean


@dataclass(frozen=True)
class InfluenceProfile:
    """Per-qubit L¹ and L² influences.

    Attributes:
        n: Number of qubits
        inf1: Inf¹_j = ‖d_j A‖₁ for each qubit
        inf2: Inf²_j = ‖d_j A‖₂² for each qubit
        total1: Σ_j Inf¹_j
        total2: Σ_j Inf²_j
        argmax1: Lowest index attaining max_j Inf¹_j
    """

    n: int
    inf1: tuple[float, ...]
    inf2: tuple[float, ...]
    total1: float
    total2: float
    argmax1: int

    def to_dict(self) -> dict[str, Any]:
        return {
            'inf1': list(self.inf1),
            'inf2': list(self.inf2),
            'total1': self.total1,
            'total2': self.total2,
            'argmax1': self.argmax1,
        }


@dataclass(frozen=True)
class SemigroupCheckReport:
    """Result of a semigroup lemma check.

    Attributes:
        name: Check identifier
        t: Time parameter
        lhs: Left side, or the largest eigenvalue of the left operator
        rhs: Right side, or the largest eigenvalue of the right operator
        satisfied: Whether slack >= -tolerance
        slack: rhs - lhs, or the smallest eigenvalue of the operator difference
        metadata: Free-form context (n, seed, qubit, ensemble tag)
    """

    name: str
    t: float
    lhs: float
    rhs: float
    satisfied: bool
    slack: float
    metadata: dict[str, Any] = field(default_factory=dict)

    def with_metadata(self, **metadata: Any) -> SemigroupCheckReport:
        return replace(self, metadata={**self.metadata, **metadata})

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), 'asserted': True}


@dataclass(frozen=True)
class InequalityReport:
    """An evaluated functional inequality lhs <= C * rhs.

    Attributes:
        name: Inequality identifier
        lhs: Left side
        rhs_without_constant: Right side evaluated with C = 1
        implied_constant: lhs / rhs, the empirical C (0 when both sides vanish)
        satisfied_at: Smallest C for which the inequality holds
        asserted: Whether a failure should fail the run
        satisfied: Outcome against the constant the inequality is asserted with
        values: Intermediate quantities (chain terms, scale factors)
        metadata: Free-form context (n, seed, ensemble tag)
    """

    name: str
    lhs: float
    rhs_without_constant: float
    implied_constant: float
    satisfied_at: float
    asserted: bool
    satisfied: bool
    values: dict[str, Any] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)

    def with_metadata(self, **metadata: Any) -> InequalityReport:
        return replace(self, metadata={**self.metadata, **metadata})

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class JuntaResult:
    """Output of Friedgut junta extraction.

    Attributes:
        discarded: The set T of averaged-out qubits
        junta: B = 2^{-|T|} tr_T(A) ⊗ 𝟙_T
        error_l2: ‖A - B‖₂
        k_actual: |T^c|
        k_bound: Junta size bound k(ε)
        eta: Influence threshold, in the scale of the input operator
        t: Semigroup time used by the threshold
        eps: Requested precision
        certified: Whether error_l2 <= eps and k_actual <= k_bound both hold
    """

    discarded: frozenset[int]
    junta: FourierOperator
    error_l2: float
    k_actual: int
    k_bound: float
    eta: float
    t: float
    eps: float
    certified: bool

    @property
    def kept(self) -> frozenset[int]:
        return frozenset(range(self.junta.n)) - self.discarded

    def to_dict(self, tol: float = 0.0) -> dict[str, Any]:
        return {
            'discarded': sorted(self.discarded),
            'kept': sorted(self.kept),
            'junta': self.junta.to_dict(tol),
            'error_l2': self.error_l2,
            'k_actual': self.k_actual,
            'k_bound': self.k_bound,
            'eta': self.eta,
            't': self.t,
            'eps': self.eps,
            'certified': self.certified,
        }


@dataclass(frozen=True)
class BooleanJuntaResult:
    """A quantum Boolean junta obtained by sign rounding an extracted junta.

    Attributes:
        junta: The rounded operator C with C² = 𝟙
        error_l2: ‖A - C‖₂
        extraction: Extraction run at eps / 3
        k_bound: Junta size bound from the quantum Boolean variant of the bound
        certified: Whether the error and support guarantees hold
    """

    junta: DenseOperator
    error_l2: float
    extraction: JuntaResult
    k_bound: float
    certified: bool

    def to_dict(self, tol: float = 0.0) -> dict[str, Any]:
        return {
            'error_l2': self.error_l2,
            'k_bound': self.k_bound,
            'certified': self.certified,
            'extraction': self.extraction.to_dict(tol),
        }


class Family(str, Enum):
    """Operator families an ensemble can draw from."""

    DICTATOR = 'dictator'
    PARITY = 'parity'
    MAJORITY = 'majority'
    TRIBES = 'tribes'
    CLASSICAL_CUSTOM = 'classical_custom'
    RANDOM_QBF = 'random_qbf'
    RANDOM_HERMITIAN = 'random_hermitian'
    RANDOM_PROJECTOR = 'random_projector'
    EVOLVED_PAULI = 'evolved_pauli'


@dataclass(frozen=True)
class EnsembleSpec:
    """A reproducible description of one operator draw.

    Attributes:
        family: Operator family
        n: Number of qubits
        seed: 64-bit seed; (spec, seed) determines the operator bit for bit
        params: Family parameters (rank, width, time, site, pauli, truth_table, couplings)
    """

    family: Family
    n: int
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {'family': self.family.value, 'n': self.n, 'seed': self.seed, 'params': dict(self.params)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> EnsembleSpec:
        try:
            return cls(Family(data['family']), int(data['n']), int(data.get('seed', 0)), dict(data.get('params', {})))
        except (KeyError, ValueError) as e:
            raise ValidationError(f'Malformed ensemble spec: {e}') from e


@dataclass(frozen=True)
class LearnReport:
    """Outcome of a learning run.

    Attributes:
        recovered: The learned operator
        l2_error: ‖recovered - hidden‖₂, recomputed with simulation access
        queries_used: Oracle queries charged during the run
        success: Whether the run met its error target and guarantees
        params: Parameters and derived constants of the run
    """

    recovered: FourierOperator
    l2_error: float
    queries_used: int
    success: bool
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, tol: float = 0.0) -> dict[str, Any]:
        return {
            'recovered': self.recovered.to_dict(tol),
            'l2_error': self.l2_error,
            'queries_used': self.queries_used,
            'success': self.success,
            'params': dict(self.params),
        }


@dataclass(frozen=True)
class CommutatorBound:
    """‖d_jA‖ against (1/4) Σ_k ‖[A, σ_k^{(j)}]‖."""

    lhs: float
    rhs: float
    satisfied: bool


@dataclass(frozen=True)
class Calibration:
    """Pinned empirical constants with where they came from.

    Attributes:
        c_emp: Talagrand constant re-asserted on fresh seeds
        c_emp_provenance: How c_emp was obtained
        c_d: Bohnenblust-Hille constants keyed by degree
        c_d_provenance: How c_d was obtained
    """

    c_emp: float
    c_emp_provenance: str
    c_d: dict[int, float]
    c_d_provenance: str

    def cd_for(self, d: int) -> float:
        if d not in self.c_d:
            raise ValidationError(f'No calibrated C_d for degree {d}.')
        return self.c_d[d]

    def to_dict(self) -> dict[str, Any]:
        return {
            'c_emp': self.c_emp,
            'c_emp_provenance': self.c_emp_provenance,
            'c_d': {str(d): value for d, value in sorted(self.c_d.items())},
            'c_d_provenance': self.c_d_provenance,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Calibration:
        return cls(
            c_emp=float(data['c_emp']),
            c_emp_provenance=str(data['c_emp_provenance']),
            c_d={int(d): float(value) for d, value in data['c_d'].items()},
            c_d_provenance=str(data['c_d_provenance']),
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a CLI run.

    Attributes:
        subcommand: Pipeline name
        n_min: Smallest qubit count swept
        n_max: Largest qubit count swept
        trials: Instances per qubit count
        seed: Root seed
        tolerances: Numerical tolerances
        out_dir: Report directory
        fmt: 'json' (JSON lines) or 'csv'
        calibration: Pinned constants
        workers: Thread count for fan-out
        options: Subcommand-specific options
    """

    subcommand: str
    n_min: int
    n_max: int
    trials: int
    seed: int
    tolerances: Tolerances
    out_dir: str
    fmt: str
    calibration: Calibration
    workers: int = 1
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.fmt not in ('json', 'csv'):
            raise ValidationError(f"Format must be 'json' or 'csv', got '{self.fmt}'.")
        if not 1 <= self.n_min <= self.n_max:
            raise ValidationError(f'Invalid qubit range {self.n_min}..{self.n_max}.')
        if self.trials < 0 or self.workers < 1:
            raise ValidationError('Trials must be nonnegative and workers positive.')

    @property
    def n_range(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data['calibration'] = self.calibration.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RunConfig:
        try:
            return cls(
                subcommand=str(data['subcommand']),
                n_min=int(data['n_min']),
                n_max=int(data['n_max']),
                trials=int(data['trials']),
                seed=int(data['seed']),
                tolerances=Tolerances(**data['tolerances']),
                out_dir=str(data['out_dir']),
                fmt=str(data['fmt']),
                calibration=Calibration.from_dict(data['calibration']),
                workers=int(data.get('workers', 1)),
                options=dict(data.get('options', {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f'Malformed run config: {e}') from e
