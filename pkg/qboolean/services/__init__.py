"""Services package for Fourier analysis of quantum Boolean functions."""

from qboolean.services.ensembles import build, classical_embed, evolved_pauli, random_qbf, sample
from qboolean.services.inequalities import (
    integral_lemma_check,
    isoperimetry_check,
    kkl_max_influence,
    lemma_aux_kkl,
    poincare_l1,
    poincare_l2,
    strong_poincare_l1,
    talagrand_l1,
    talagrand_l1l2,
)
from qboolean.services.influence import d_j, influence, profile
from qboolean.services.junta import boolean_junta, friedgut_extract, junta_bound, sign_round
from qboolean.services.learn import QueryOracle, bh_ratio, goldreich_levin, learn_qbf, low_degree_learn
from qboolean.services.pauli_core import (
    inner,
    is_quantum_boolean,
    partial_average,
    pauli_matrix,
    schatten_norm,
    to_dense,
    to_fourier,
    variance,
)
from qboolean.services.semigroup import apply_semigroup, carre_du_champ, generator
from qboolean.services.weighted import WeightedContext, general_poincare_l1, kms_norm, verify_axioms

__all__ = [
    'QueryOracle',
    'WeightedContext',
    'apply_semigroup',
    'bh_ratio',
    'boolean_junta',
    'build',
    'carre_du_champ',
    'classical_embed',
    'd_j',
    'evolved_pauli',
    'friedgut_extract',
    'general_poincare_l1',
    'generator',
    'goldreich_levin',
    'influence',
    'inner',
    'integral_lemma_check',
    'is_quantum_boolean',
    'isoperimetry_check',
    'junta_bound',
    'kkl_max_influence',
    'kms_norm',
    'learn_qbf',
    'lemma_aux_kkl',
    'low_degree_learn',
    'partial_average',
    'pauli_matrix',
    'poincare_l1',
    'poincare_l2',
    'profile',
    'random_qbf',
    'sample',
    'schatten_norm',
    'sign_round',
    'strong_poincare_l1',
    'talagrand_l1',
    'talagrand_l1l2',
    'to_dense',
    'to_fourier',
    'variance',
    'verify_axioms',
]
