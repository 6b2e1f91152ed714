"""Extremal constants and s-number bounds for second-order Sobolev embeddings."""

from ._snumbers import (
    BoundCertificate,
    ConvergenceError,
    ExtremalKind,
    ExtremalSolution,
    Target,
    __version__,
    best_constant_shift,
    certify_lower,
    certify_upper,
    check_factorization,
    clamped_snumbers,
    gamma_p,
    lower_bound_value,
    partition_lower,
    partition_upper,
    snumber_table,
    solve,
    svd_snumbers,
    t1_reference,
    unit_b_constant,
    upper_bound_value,
)

__all__ = [
    "BoundCertificate",
    "ConvergenceError",
    "ExtremalKind",
    "ExtremalSolution",
    "Target",
    "__version__",
    "best_constant_shift",
    "certify_lower",
    "certify_upper",
    "check_factorization",
    "clamped_snumbers",
    "gamma_p",
    "lower_bound_value",
    "partition_lower",
    "partition_upper",
    "snumber_table",
    "solve",
    "svd_snumbers",
    "t1_reference",
    "unit_b_constant",
    "upper_bound_value",
]
