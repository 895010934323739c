"""Learning hidden operators through a simulated coefficient oracle.

The oracle samples the bit ε with P(ε = 0) = (1 + Â_s)/2, so 1 - 2ε is an unbiased
estimate of Â_s. Goldreich-Levin subtree weights are computed exactly from the hidden
coefficients and perturbed with Gaussian noise of variance 1/shots, with `shots`
charged as queries.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from qboolean.exceptions import DegreeError, NotQuantumBooleanError, ValidationError
from qboolean.models import DEFAULT_TOLERANCES, FourierOperator, LearnReport, PauliString
from qboolean.services.ensembles import BOOLEAN_DEGREES, degree_strings, random_low_degree, random_low_degree_boolean
from qboolean.services.influence import profile
from qboolean.services.pauli_core import (
    Operator,
    ensure_fourier,
    is_quantum_boolean,
    partial_average,
    to_dense,
)
from qboolean.utils.helpers import instance_rng, is_hermitian_matrix, operator_norm

logger = logging.getLogger(__name__)


class QueryOracle:
    """Stateful simulated access to a hidden operator.

    Attributes:
        n: Number of qubits
        query_count: Queries charged so far; only ever increases
    """

    def __init__(
        self,
        hidden: Operator,
        seed: int | np.random.Generator = 0,
        tol: float = DEFAULT_TOLERANCES.qbf,
        require_boolean: bool = True,
    ) -> None:
        """Validate the hidden operator and set up the sampling stream.

        Args:
            hidden: Operator to learn
            seed: Seed or generator for all sampling
            tol: Tolerance of the validity checks
            require_boolean: Demand a quantum Boolean function; otherwise a Hermitian
                contraction is accepted

        Raises:
            NotQuantumBooleanError: If the hidden operator fails the validity checks
            ValidationError: If a coefficient exceeds 1 in modulus beyond tol
        """
        self._hidden = ensure_fourier(hidden)
        dense = to_dense(self._hidden).matrix
        if require_boolean:
            if not is_quantum_boolean(self._hidden, tol):
                raise NotQuantumBooleanError('Hidden operator must be a quantum Boolean function.')
        elif not is_hermitian_matrix(dense, tol) or operator_norm(dense) > 1 + tol:
            raise NotQuantumBooleanError('Hidden operator must be a Hermitian contraction.')
        coefficients = self._hidden.to_vector()
        if np.max(np.abs(coefficients)) > 1 + tol:
            raise ValidationError('Hidden coefficients exceed 1 in modulus.')
        self.n = self._hidden.n
        self._coefficients = np.clip(coefficients.real, -1.0, 1.0)
        self._weights = (np.abs(coefficients) ** 2).reshape([4] * self.n)
        self._rng = seed if isinstance(seed, np.random.Generator) else instance_rng(seed)
        self.query_count = 0

    @property
    def hidden(self) -> FourierOperator:
        """The hidden operator; simulation access for verification only."""
        return self._hidden

    def _charge(self, shots: int) -> None:
        if shots < 0:
            raise ValidationError(f'Shot count must be nonnegative, got {shots}.')
        self.query_count += int(shots)

    def _flip_probability(self, s: PauliString) -> float:
        if s.n != self.n:
            raise ValidationError(f'Pauli string {s} does not act on {self.n} qubits.')
        return (1.0 - self._coefficients[s.index]) / 2.0

    def draw_bits(self, s: PauliString, shots: int) -> np.ndarray:
        """`shots` independent bits, each 1 with probability (1 - Â_s)/2."""
        probability = self._flip_probability(s)
        self._charge(shots)
        return (self._rng.random(shots) < probability).astype(np.int8)

    def count_ones(self, s: PauliString, shots: int) -> int:
        """Number of ones among `shots` bits, drawn as a single binomial."""
        probability = self._flip_probability(s)
        self._charge(shots)
        return int(self._rng.binomial(shots, probability))

    def subtree_weight(self, prefix: Sequence[int]) -> float:
        """Exact Σ |Â_s|² over strings extending `prefix`."""
        return float(np.sum(self._weights[tuple(prefix)]))

    def estimate_subtree_weight(self, prefix: Sequence[int], shots: int) -> float:
        """Noisy subtree weight clipped to [0, 1]; costs `shots` queries."""
        self._charge(shots)
        noisy = self.subtree_weight(prefix) + self._rng.normal(0.0, 1.0 / math.sqrt(shots))
        return float(np.clip(noisy, 0.0, 1.0))


def _check_unit(name: str, value: float, closed: bool = False) -> None:
    if not (0 < value <= 1 if closed else 0 < value < 1):
        raise ValidationError(f'{name} must lie in (0, 1{"]" if closed else ")"}, got {value}.')


def sample_coefficient_bit(oracle: QueryOracle, s: PauliString) -> int:
    """One oracle bit for string s; 1 - 2ε is unbiased for Â_s."""
    return int(oracle.draw_bits(s, 1)[0])


def coefficient_sample_size(eta: float, delta: float) -> int:
    """N = ceil((2/η²) log(2/δ)) samples for precision η with confidence 1 - δ."""
    return math.ceil(2.0 / eta ** 2 * math.log(2.0 / delta))


def estimate_coefficient(oracle: QueryOracle, s: PauliString, eta: float, delta: float) -> float:
    """Estimate Â_s to within ±η with probability at least 1 - δ.

    Raises:
        ValidationError: If eta or delta is outside (0, 1]
    """
    _check_unit('eta', eta, closed=True)
    _check_unit('delta', delta, closed=True)
    samples = coefficient_sample_size(eta, delta)
    return 1.0 - 2.0 * oracle.count_ones(s, samples) / samples


def goldreich_levin(oracle: QueryOracle, gamma: float, delta: float) -> list[PauliString]:
    """Find every string with |Â_s| >= γ and only strings with |Â_s| >= γ/2.

    Prefixes whose estimated subtree weight is at least γ²/2 are extended one
    position at a time. Estimates are accurate to γ²/4 with probability 1 - δ over all
    estimates, and at most ceil(4(Ŵ + γ²/4)/γ²) prefixes survive per level, where Ŵ is
    the estimated total weight ‖A‖₂².

    Args:
        oracle: Query oracle
        gamma: Threshold in (0, 1)
        delta: Failure probability in (0, 1)

    Returns:
        Sorted list of strings

    Raises:
        ValidationError: If gamma or delta is outside (0, 1)
    """
    _check_unit('gamma', gamma)
    _check_unit('delta', delta)
    accuracy = gamma ** 2 / 4
    threshold = gamma ** 2 / 2
    worst_cap = math.ceil(4 * (1 + accuracy) / gamma ** 2)
    estimates = 1 + 4 * oracle.n * worst_cap
    shots = math.ceil(2.0 / accuracy ** 2 * math.log(2.0 * estimates / delta))

    root = oracle.estimate_subtree_weight((), shots)
    cap = max(1, math.ceil(4 * (root + accuracy) / gamma ** 2))
    frontier: list[tuple[int, ...]] = [()] if root >= threshold else []
    for _ in range(oracle.n):
        if not frontier:
            break
        scored = []
        for prefix in frontier:
            for letter in range(4):
                candidate = prefix + (letter,)
                weight = oracle.estimate_subtree_weight(candidate, shots)
                if weight >= threshold:
                    scored.append((weight, candidate))
        if len(scored) > cap:
            scored.sort(key=lambda item: (-item[0], item[1]))
            scored = scored[:cap]
        frontier = sorted(candidate for _, candidate in scored)
    logger.debug('Goldreich-Levin kept %d strings with %d shots per estimate', len(frontier), shots)
    return [PauliString(prefix) for prefix in frontier]


def _top_qubits(inf2: Sequence[float], k: int) -> list[int]:
    order = sorted(range(len(inf2)), key=lambda j: (-inf2[j], j))
    return sorted(order[:k])


def learn_qbf(
    oracle: QueryOracle,
    eps: float,
    delta: float,
    k_hint: int,
    gamma: float | None = None,
) -> LearnReport:
    """Learn a quantum Boolean function close to a k-junta in L².

    Runs Goldreich-Levin at γ = ε 2^{-k} with confidence δ/2, then estimates each
    listed coefficient to η = ε/(2√|L|) with confidence δ/(2|L|). The tail bound
    ‖A - Σ_{s∈L} Â_s σ_s‖₂ <= (ε_J² + 4^k γ²)^{1/2} is checked with the true
    coefficients, where ε_J is the distance from A to its average over all but its k
    most influential qubits.

    Args:
        oracle: Query oracle
        eps: Precision in (0, 1)
        delta: Failure probability in (0, 1)
        k_hint: Junta size
        gamma: Override for the search threshold

    Returns:
        LearnReport

    Raises:
        ValidationError: On out-of-range parameters
    """
    _check_unit('eps', eps)
    _check_unit('delta', delta)
    if k_hint < 0:
        raise ValidationError(f'k_hint must be nonnegative, got {k_hint}.')
    gamma = eps * 2.0 ** -k_hint if gamma is None else gamma
    start = oracle.query_count

    listed = goldreich_levin(oracle, gamma, delta / 2)
    search_queries = oracle.query_count - start
    estimates: dict[PauliString, float] = {}
    eta = eps / (2 * math.sqrt(len(listed))) if listed else 0.0
    if listed:
        eta = min(eta, 1.0)
        for s in listed:
            estimates[s] = estimate_coefficient(oracle, s, eta, delta / (2 * len(listed)))
    recovered = FourierOperator.from_coefficients(oracle.n, estimates)

    hidden = oracle.hidden
    l2_error = (recovered - hidden).norm_l2()
    listed_set = set(listed)
    large = [s for s, value in hidden.items() if abs(value) >= gamma]
    found_all_large = all(s in listed_set for s in large)
    only_relevant = all(abs(hidden.coefficient(s)) >= gamma / 2 - 1e-12 for s in listed)

    kept = _top_qubits(profile(hidden).inf2, k_hint)
    junta_error = (hidden - partial_average(hidden, [j for j in range(oracle.n) if j not in kept])).norm_l2()
    truncated = FourierOperator.from_coefficients(oracle.n, {s: hidden.coefficient(s) for s in listed})
    tail_error = (hidden - truncated).norm_l2()
    tail_bound = math.sqrt(junta_error ** 2 + 4 ** k_hint * gamma ** 2)
    tail_ok = tail_error <= tail_bound * (1 + 1e-9)
    error_bound = math.sqrt(tail_bound ** 2 + len(listed) * eta ** 2)
    success = found_all_large and only_relevant and l2_error <= error_bound * (1 + 1e-9)
    if found_all_large and not tail_ok:
        logger.error('Tail bound violated: %.6g > %.6g', tail_error, tail_bound)

    return LearnReport(
        recovered=recovered,
        l2_error=l2_error,
        queries_used=oracle.query_count - start,
        success=bool(success),
        params={
            'eps': eps,
            'delta': delta,
            'gamma': gamma,
            'k_hint': k_hint,
            'eta': eta,
            'delta_search': delta / 2,
            'delta_estimation': delta / 2,
            'list_size': len(listed),
            'list': [s.label for s in listed],
            'search_queries': search_queries,
            'guarantee_large_found': found_all_large,
            'guarantee_listed_relevant': only_relevant,
            'junta_error': junta_error,
            'tail_error': tail_error,
            'tail_bound': tail_bound,
            'tail_bound_holds': bool(tail_ok),
            'error_bound': error_bound,
        },
    )


def low_degree_sample_size(n: int, d: int, eps: float, delta: float, cd: float) -> int:
    """N = ceil(e⁸ d² / ε^{d+1} · C_d^{2d} · log(n/δ)), at least 1."""
    return max(1, math.ceil(math.exp(8) * d ** 2 / eps ** (d + 1) * cd ** (2 * d) * math.log(n / delta)))


def low_degree_learn(oracle: QueryOracle, d: int, eps: float, delta: float, cd: float) -> LearnReport:
    """Learn a degree-d operator by estimating every coefficient with |s| <= d.

    Each coefficient uses N samples. Estimates with |α_s| < b(1 + √(d+1)) are dropped,
    where b = (2 log(2M/δ)/N)^{1/2} is the Hoeffding precision over all M strings.
    For d = 0 the identity coefficient is kept unthresholded.

    Args:
        oracle: Query oracle
        d: Degree bound
        eps: Target for ‖H - A‖₂², in (0, 1)
        delta: Failure probability in (0, 1)
        cd: Bohnenblust-Hille constant C_d

    Returns:
        LearnReport; queries_used equals N times the number of strings

    Raises:
        DegreeError: If the hidden operator has weight above d
        ValidationError: On out-of-range parameters
    """
    _check_unit('eps', eps)
    _check_unit('delta', delta)
    if d < 0 or not cd > 0:
        raise ValidationError(f'Need d >= 0 and C_d > 0, got d={d}, C_d={cd}.')
    hidden = oracle.hidden
    if hidden.degree(DEFAULT_TOLERANCES.support) > d:
        raise DegreeError(f'Hidden operator has degree above {d}.')

    start = oracle.query_count
    strings = degree_strings(oracle.n, d)
    samples = low_degree_sample_size(oracle.n, d, eps, delta, cd)
    precision = math.sqrt(2.0 * math.log(2.0 * len(strings) / delta) / samples)
    cutoff = precision * (1 + math.sqrt(d + 1)) if d > 0 else 0.0
    kept: dict[PauliString, float] = {}
    for s in strings:
        estimate = 1.0 - 2.0 * oracle.count_ones(s, samples) / samples
        if abs(estimate) >= cutoff:
            kept[s] = estimate
    recovered = FourierOperator.from_coefficients(oracle.n, kept)
    squared_error = (recovered - hidden).norm_l2() ** 2
    return LearnReport(
        recovered=recovered,
        l2_error=math.sqrt(squared_error),
        queries_used=oracle.query_count - start,
        success=bool(squared_error <= eps),
        params={
            'eps': eps,
            'delta': delta,
            'd': d,
            'C_d': cd,
            'samples_per_coefficient': samples,
            'strings': len(strings),
            'precision': precision,
            'cutoff': cutoff,
            'kept': len(kept),
        },
    )


def bh_ratio(F: Operator, d: int, tol: float = DEFAULT_TOLERANCES.support) -> float:
    """(Σ_{|s|<=d} |Â_s|^{2d/(d+1)})^{(d+1)/2d} / ‖A‖.

    Raises:
        ValidationError: If d < 1
        DegreeError: If F has weight above d
    """
    if d < 1:
        raise ValidationError(f'Degree must be at least 1, got {d}.')
    F = ensure_fourier(F)
    if F.degree(tol) > d:
        raise DegreeError(f'Operator has degree above {d}.')
    q = 2 * d / (d + 1)
    lhs = float(np.sum(np.abs(F.values) ** q) ** (1 / q))
    norm = operator_norm(to_dense(F).matrix)
    return lhs / norm if norm > 0 else 0.0


def calibrate_cd(d: int, n_max: int, count: int, seed: int) -> float:
    """Largest Bohnenblust-Hille ratio over random degree-d operators with n <= n_max.

    Draws Gaussian degree-d operators (full and diagonal) and, for d <= 2, diagonal
    quantum Boolean functions of degree d.
    """
    best = 0.0
    for n in range(max(1, d), n_max + 1):
        for index in range(count):
            rng = instance_rng(seed, d, n, index)
            candidates = [random_low_degree(n, d, rng), random_low_degree(n, d, rng, diagonal=True)]
            if d in BOOLEAN_DEGREES:
                candidates.append(random_low_degree_boolean(n, d, rng))
            best = max(best, *(bh_ratio(candidate, d) for candidate in candidates))
    return best
