"""Bit-flip derivations d_j and L¹/L² influences."""

from __future__ import annotations

import numpy as np

from qboolean.exceptions import ValidationError
from qboolean.models import DEFAULT_TOLERANCES, FourierOperator, InfluenceProfile
from qboolean.services.pauli_core import Operator, ensure_fourier, schatten_norm, support_of


def _check_qubit(j: int, n: int) -> None:
    if not 0 <= j < n:
        raise ValidationError(f'Qubit index {j} out of range for n={n}.')


def d_j(F: Operator, j: int) -> FourierOperator:
    """Keep exactly the coefficients with s_j ≠ 0.

    Args:
        F: Operator
        j: Qubit index

    Returns:
        d_j(F) = Σ_{s_j≠0} Â_s σ_s

    Raises:
        ValidationError: If j is out of range
    """
    F = ensure_fourier(F)
    _check_qubit(j, F.n)
    return F.with_values(np.where(F.digits()[:, j] != 0, F.values, 0))


def influence(A: Operator, j: int, p: float = 1) -> float:
    """Inf^p_j(A) = ‖d_j A‖_p^p with the normalized Schatten norm.

    p = 2 is read off the coefficients; other exponents go through a dense
    spectral decomposition of d_j A.
    """
    derived = d_j(A, j)
    if p == 2:
        return float(np.sum(np.abs(derived.values) ** 2))
    return schatten_norm(derived, p).value ** p


def profile(A: Operator, tol: float = DEFAULT_TOLERANCES.support) -> InfluenceProfile:
    """Per-qubit influences, totals and the lowest-index argmax of Inf¹.

    Qubits outside supp(A) get influence exactly 0.

    Args:
        A: Operator
        tol: Support tolerance

    Returns:
        InfluenceProfile
    """
    F = ensure_fourier(A)
    support = support_of(F, tol)
    inf1 = tuple(influence(F, j, 1) if j in support else 0.0 for j in range(F.n))
    inf2 = tuple(influence(F, j, 2) if j in support else 0.0 for j in range(F.n))
    return InfluenceProfile(
        n=F.n,
        inf1=inf1,
        inf2=inf2,
        total1=float(sum(inf1)),
        total2=float(sum(inf2)),
        argmax1=int(np.argmax(inf1)),
    )
