"""Exact lattice propagators, path sums, shutter and edge diffraction."""

from .errors import (
    BudgetExceeded,
    ComputeError,
    ConfigError,
    DimensionMismatch,
    DomainError,
    GridTooCoarse,
    LatticePropError,
    NonConvergence,
    QuadratureFailure,
    RegimeViolation,
    SingularRadius,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ComputeError",
    "ConfigError",
    "DimensionMismatch",
    "DomainError",
    "GridTooCoarse",
    "LatticePropError",
    "NonConvergence",
    "QuadratureFailure",
    "RegimeViolation",
    "SingularRadius",
    "__version__",
]
