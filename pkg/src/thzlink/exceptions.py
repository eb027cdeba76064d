"""Exception hierarchy shared by the library and the command line front end."""


class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class EstimationError(RuntimeError):
    """An estimator could not find a usable answer in its input."""


class ConfigError(ValueError):
    """A configuration file or override could not be resolved."""


class NumericalError(ArithmeticError):
    """A computation produced NaN or infinite values where finite ones were required."""
