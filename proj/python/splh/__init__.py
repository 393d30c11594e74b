"""Hankel smallest-eigenvalue computations for the weight x^alpha exp(-x - t/x).

Thin wrapper over the compiled extension. Values computed at high precision
cross the boundary as decimal strings; parse them with float() or an
arbitrary-precision library when the extra digits matter.
"""

from ._splh import (  # noqa: F401
    ConfigError,
    ConvergenceError,
    DomainError,
    PrecisionError,
    ResourceError,
    endpoint_expansion,
    kernel_diag_asymptotic,
    kernel_diagonal,
    lambda_prediction,
    moments,
    pn_asymptotic,
    pn_exact,
    precision_policy,
    rayleigh_bound,
    smallest_eigenvalue,
    solve_endpoints,
    spot_check_moment,
    verify_identities,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "PrecisionError",
    "ResourceError",
    "endpoint_expansion",
    "kernel_diag_asymptotic",
    "kernel_diagonal",
    "lambda_prediction",
    "moments",
    "pn_asymptotic",
    "pn_exact",
    "precision_policy",
    "rayleigh_bound",
    "smallest_eigenvalue",
    "solve_endpoints",
    "spot_check_moment",
    "verify_identities",
]
