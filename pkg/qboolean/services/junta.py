"""Friedgut junta extraction, junta size bounds and sign rounding."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import linalg

from qboolean.exceptions import NotQuantumBooleanError, NumericalError, ValidationError
from qboolean.models import (
    DEFAULT_TOLERANCES,
    BooleanJuntaResult,
    DenseOperator,
    JuntaResult,
    SemigroupCheckReport,
)
from qboolean.services.influence import profile
from qboolean.services.pauli_core import (
    Operator,
    ensure_fourier,
    is_quantum_boolean,
    partial_average,
    schatten_norm,
    support_of,
    to_dense,
    to_fourier,
)
from qboolean.services.semigroup import apply_semigroup
from qboolean.utils.helpers import hermitian_part, is_hermitian_matrix, scaled_tolerance

logger = logging.getLogger(__name__)

ALPHA_FLOOR = 1e-12
ZERO_EIGENVALUE = 1e-12
THRESHOLD_SLACK = 1e-9
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def _check_eps(eps: float) -> None:
    if not 0 < eps <= 2:
        raise ValidationError(f'eps must lie in (0, 2], got {eps}.')


def alpha_of_t(t: float) -> float:
    """α(t) = (1 - e^{-2t})/(1 + e^{-2t}) = tanh t."""
    return math.tanh(t)


def junta_bound(inf1: float, inf2: float, eps: float, boolean: bool = False) -> float:
    """Junta size bound k(ε).

    Inf² >= 1:  Inf¹² exp((48 Inf²/ε²) log(2 Inf²/ε))
    Inf² < 1:   (Inf¹²/Inf²) exp((48 Inf²/ε²) log(2 √Inf²/ε))
    The quantum Boolean variant uses 432 and 6 in place of 48 and 2.

    Args:
        inf1: Total L¹ influence
        inf2: Total L² influence
        eps: Precision in (0, 2]
        boolean: Use the quantum Boolean constants

    Returns:
        The bound, math.inf on overflow, 0 when inf2 = 0

    Raises:
        ValidationError: If eps is out of range or an influence is negative
    """
    _check_eps(eps)
    if inf1 < 0 or inf2 < 0:
        raise ValidationError('Influences must be nonnegative.')
    if inf2 == 0:
        return 0.0
    rate, factor = (432.0, 6.0) if boolean else (48.0, 2.0)
    exponent = rate * inf2 / eps ** 2
    if inf2 >= 1:
        prefactor = inf1 ** 2
        log_argument = factor * inf2 / eps
    else:
        prefactor = inf1 ** 2 / inf2
        log_argument = factor * math.sqrt(inf2) / eps
    if prefactor == 0:
        return 0.0
    log_bound = math.log(prefactor) + exponent * math.log(log_argument)
    if log_bound > _LOG_FLOAT_MAX:
        return math.inf
    return math.exp(log_bound)


def friedgut_extract(A: Operator, eps: float, tol: float = DEFAULT_TOLERANCES.support) -> JuntaResult:
    """Average out every low-influence qubit.

    With t = ε²/(16 Inf²) and α = α(t), the threshold is
    η = (ε/2)^{2/α} / (Inf¹ · Inf²^{(1-α)/α}) and T = {j : Inf¹_j < η}. When Inf² < 1
    the thresholds are computed for λA with λ = Inf²^{-1/2} at precision λε; if that
    precision exceeds 2 every qubit is averaged out.

    Args:
        A: Operator
        eps: Precision in (0, 2]
        tol: Support tolerance for the influence profile

    Returns:
        JuntaResult with both guarantees re-verified

    Raises:
        ValidationError: If eps is out of range
    """
    _check_eps(eps)
    F = ensure_fourier(A)
    prof = profile(F, tol)
    everything = frozenset(range(F.n))
    if prof.total2 <= 0:
        return JuntaResult(
            discarded=everything, junta=F, error_l2=0.0, k_actual=0, k_bound=0.0,
            eta=math.inf, t=math.inf, eps=eps, certified=True,
        )

    scale = 1.0 if prof.total2 >= 1 else 1.0 / math.sqrt(prof.total2)
    scaled_eps = scale * eps
    inf1 = scale * prof.total1
    inf2 = scale ** 2 * prof.total2
    t = scaled_eps ** 2 / (16 * inf2)

    if scaled_eps > 2:
        discarded = everything
        eta = math.inf
    else:
        alpha = alpha_of_t(t)
        if alpha < ALPHA_FLOOR:
            logger.warning('Degenerate Friedgut parameters: alpha(t)=%.3g floored to %.0e', alpha, ALPHA_FLOOR)
            alpha = ALPHA_FLOOR
        log_eta = (2 / alpha) * math.log(scaled_eps / 2) - math.log(inf1) - ((1 - alpha) / alpha) * math.log(inf2)
        log_threshold = log_eta + math.log1p(-THRESHOLD_SLACK)
        discarded = frozenset(
            j for j, value in enumerate(prof.inf1)
            if value <= 0 or math.log(scale * value) < log_threshold
        )
        eta = math.exp(log_eta) / scale if log_eta < _LOG_FLOAT_MAX else math.inf

    junta = partial_average(F, discarded)
    error = schatten_norm(to_dense(F) - to_dense(junta), 2).value
    k_actual = F.n - len(discarded)
    k_bound = junta_bound(prof.total1, prof.total2, eps)
    certified = error <= eps * (1 + 1e-9) and k_actual <= k_bound * (1 + 1e-9)
    if not certified:
        logger.error('Friedgut guarantee failed: error=%.6g eps=%.6g k=%d bound=%.6g', error, eps, k_actual, k_bound)
    return JuntaResult(
        discarded=discarded, junta=junta, error_l2=error, k_actual=k_actual,
        k_bound=k_bound, eta=eta, t=t, eps=eps, certified=certified,
    )


def check_partial_average_lemma(
    A: Operator,
    t: float,
    eta: float,
    tol: float = DEFAULT_TOLERANCES.psd,
) -> SemigroupCheckReport:
    """‖P_tA - partial_average(P_tA, T)‖₂² <= (η Inf¹(A))^{α(t)} Inf²(A)^{1-α(t)}.

    T is the set of qubits with Inf¹_j(A) <= η.

    Raises:
        ValidationError: If t <= 0 or eta < 0
    """
    if not t > 0 or eta < 0:
        raise ValidationError(f'Need t > 0 and eta >= 0, got t={t}, eta={eta}.')
    F = ensure_fourier(A)
    prof = profile(F)
    discarded = [j for j, value in enumerate(prof.inf1) if value <= eta]
    smoothed = apply_semigroup(F, t)
    lhs = (smoothed - partial_average(smoothed, discarded)).norm_l2() ** 2
    alpha = alpha_of_t(t)
    rhs = (eta * prof.total1) ** alpha * prof.total2 ** (1 - alpha)
    return SemigroupCheckReport(
        name='partial_average_lemma', t=t, lhs=lhs, rhs=rhs,
        satisfied=bool(rhs - lhs >= -scaled_tolerance(tol, rhs)), slack=rhs - lhs,
        metadata={'eta': eta, 'discarded': len(discarded)},
    )


def sign_round(B: DenseOperator, tol: float = DEFAULT_TOLERANCES.qbf) -> DenseOperator:
    """sgn(B) by spectral calculus, with sgn(λ) = -1 for λ <= 0.

    Eigenvalues with |λ| < 1e-12 count as 0. The inequality
    ‖B - sgn B‖₂ <= ‖B² - 𝟙‖₂ is verified on every call.

    Raises:
        NotQuantumBooleanError: If B is not Hermitian
        NumericalError: If the verified inequality fails
    """
    matrix = B.matrix
    if not is_hermitian_matrix(matrix, tol):
        raise NotQuantumBooleanError('Sign rounding requires a Hermitian operator.')
    w, v = linalg.eigh(hermitian_part(matrix))
    signs = np.where(w > ZERO_EIGENVALUE, 1.0, -1.0)
    rounded = DenseOperator(B.n, (v * signs) @ v.conj().T)
    distance = schatten_norm(B - rounded, 2).value
    defect = schatten_norm(B @ B - DenseOperator.identity(B.n), 2).value
    if distance > defect + scaled_tolerance(1e-10, defect):
        raise NumericalError(f'Sign rounding moved B by {distance:.6g} > ‖B²-𝟙‖₂ = {defect:.6g}.')
    return rounded


def boolean_junta(A: Operator, eps: float, tol: float = DEFAULT_TOLERANCES.qbf) -> BooleanJuntaResult:
    """Quantum Boolean junta: extract at ε/3 then sign round.

    Args:
        A: Quantum Boolean function
        eps: Precision in (0, 2]
        tol: Tolerance of the quantum Boolean test and the support check

    Returns:
        BooleanJuntaResult

    Raises:
        NotQuantumBooleanError: If A is not quantum Boolean
        ValidationError: If eps is out of range
    """
    _check_eps(eps)
    if not is_quantum_boolean(A, tol):
        raise NotQuantumBooleanError('Boolean junta extraction requires a quantum Boolean function.')
    F = ensure_fourier(A)
    extraction = friedgut_extract(F, eps / 3)
    rounded = sign_round(to_dense(extraction.junta), tol)
    error = schatten_norm(to_dense(F) - rounded, 2).value
    prof = profile(F)
    k_bound = junta_bound(prof.total1, prof.total2, eps, boolean=True)
    supported = support_of(to_fourier(rounded), 1e-9) <= extraction.kept
    certified = error <= eps * (1 + 1e-9) and supported
    return BooleanJuntaResult(
        junta=rounded, error_l2=error, extraction=extraction, k_bound=k_bound, certified=bool(certified),
    )
