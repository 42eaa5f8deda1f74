"""Exception types shared across the package."""


class QLinearError(Exception):
    """Base class for all package-specific errors."""


class DomainError(QLinearError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidSpec(QLinearError, ValueError):
    """A parameter object violates its own constraints."""


class NonConvergence(QLinearError, ArithmeticError):
    """A truncated sum or product failed to meet its tail criterion."""


class ScanExhausted(QLinearError, RuntimeError):
    """A sign-change scan ran out of steps before finding enough brackets.

    This signals a too-coarse scan, not the absence of zeros.
    """


class WindowTooSmall(QLinearError, ValueError):
    """A grid window is too narrow for the requested tolerance."""


class NotNormalized(QLinearError, ValueError):
    """An operation requiring a unit-norm input received something else."""


class IllConditioned(QLinearError, ArithmeticError):
    """A linear solve has lower effective rank than unknowns."""
