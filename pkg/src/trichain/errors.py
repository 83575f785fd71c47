"""Exception types shared across the toolkit."""


class TrichainError(Exception):
    """Base class for all toolkit errors."""


class InvalidDimensionError(TrichainError, ValueError):
    """Operator or state has an unusable dimension."""


class ValidationError(TrichainError, ValueError):
    """An input violates a documented precondition (e.g. non-Hermitian)."""


class SingularityError(TrichainError, ZeroDivisionError):
    """A closed-form coupling expression was evaluated at a pole.

    ``symbol`` names the vanishing denominator so sweeps can record the
    reason a grid point is missing.
    """

    def __init__(self, symbol: str, message: str = ""):
        self.symbol = symbol
        super().__init__(message or f"singular denominator: {symbol}")


class BasisError(TrichainError, RuntimeError):
    """Bare-to-eigenstate matching failed (hybridized or degenerate point)."""


class CalibrationError(TrichainError, RuntimeError):
    """A working-point search did not find an interior optimum."""


class NumericalFailureError(TrichainError, RuntimeError):
    """Overflow, non-convergence, or an invariant drifted out of tolerance."""


class ConfigError(TrichainError, ValueError):
    """Configuration file failed validation."""
