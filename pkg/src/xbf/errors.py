"""Exception and warning types shared across the package."""


class XbfError(Exception):
    """Base class for package-specific errors."""


class DomainError(XbfError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(XbfError, ValueError):
    """An operation was asked for an unsupported parameter/method combination."""


class NumericalError(XbfError, ArithmeticError):
    """A numerical evaluation failed beyond its error budget."""


class ConvergenceWarning(UserWarning):
    """A quadrature result is returned without meeting its tolerances."""


class DegradedAccuracyWarning(UserWarning):
    """An evaluation ran outside its documented accuracy domain."""
