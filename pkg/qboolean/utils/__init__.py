"""Utilities package."""

from qboolean.utils.helpers import (
    hermitian_part,
    instance_rng,
    is_hermitian_matrix,
    kron_all,
    log_plus,
    matrix_function,
    max_eigenvalue,
    min_eigenvalue,
    operator_norm,
    psd_sqrt,
    scaled_tolerance,
    singular_values,
    site_expectation,
)

__all__ = [
    'hermitian_part',
    'instance_rng',
    'is_hermitian_matrix',
    'kron_all',
    'log_plus',
    'matrix_function',
    'max_eigenvalue',
    'min_eigenvalue',
    'operator_norm',
    'psd_sqrt',
    'scaled_tolerance',
    'singular_values',
    'site_expectation',
]
