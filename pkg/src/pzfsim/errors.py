"""Exception types shared across the package."""


class PzfSimError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(PzfSimError, ValueError):
    """Array shapes or sizes are inconsistent with the operation."""


class DomainError(PzfSimError, ValueError):
    """A scalar argument lies outside the mathematical domain of the operation."""


class SingularMatrixError(PzfSimError, ArithmeticError):
    """A Gram matrix is numerically rank deficient (degenerate user channels)."""


class ConfigError(PzfSimError, ValueError):
    """A simulation configuration violates an invariant."""


class HarnessError(PzfSimError, RuntimeError):
    """A sweep aborted at runtime, e.g. too many singular trials."""
