"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where the quantity is defined."""


class DegenerateConfigurationError(DomainError):
    """Measure-zero configuration where the closed forms themselves degenerate."""


class AccuracyError(ArithmeticError):
    """A quadrature failed to converge or an integral diverges."""


class UnsupportedDataError(TypeError):
    """The requested computation is not implemented for this kind of data."""
