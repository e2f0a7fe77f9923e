"""Exception hierarchy shared across the package."""


class SpinorHeraldError(Exception):
    """Base class for all package errors."""


class ConfigError(SpinorHeraldError, ValueError):
    """Invalid run configuration or invalid arguments."""


class NumericalError(SpinorHeraldError, ArithmeticError):
    """A computation could not deliver a result meeting its accuracy contract."""


class ConvergenceError(NumericalError):
    """An iterative solver failed to converge."""


class ZeroProbabilityError(NumericalError):
    """Conditioning on a measurement outcome whose probability is (numerically) zero."""
