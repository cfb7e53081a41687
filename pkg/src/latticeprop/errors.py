"""Exception hierarchy shared by all modules."""


class LatticePropError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(LatticePropError, ArithmeticError):
    """A series or recurrence did not reach its tolerance within budget."""


class RegimeViolation(LatticePropError, ValueError):
    """An asymptotic form was requested outside its region of validity."""


class DomainError(LatticePropError, ValueError):
    pass


class DimensionMismatch(LatticePropError, ValueError):
    pass


class BudgetExceeded(LatticePropError, RuntimeError):
    """Explicit enumeration would exceed its combinatorial budget."""


class SingularRadius(LatticePropError, ValueError):
    pass


class GridTooCoarse(LatticePropError, ValueError):
    pass


class QuadratureFailure(LatticePropError, ArithmeticError):
    pass


class ConfigError(LatticePropError, ValueError):
    """Invalid scenario file. ``path`` names the offending field."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ComputeError(LatticePropError, RuntimeError):
    """Wraps a numerical failure raised while running a scenario."""
