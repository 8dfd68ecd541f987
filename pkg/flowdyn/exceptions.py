BuildInValueError = ValueError
BuildInTypeError = TypeError

__all__ = [
    "FlowDynError",
    "ValueError",
    "TypeError",
    "NumericalDegeneracyError",
    "FitFailureError",
    "UndefinedMetricError",
    "CapacityMismatchError",
    "UnknownNodeError",
    "DuplicateNodeError",
    "ParseError",
    "ConfigError",
]


class FlowDynError(Exception):
    """Base exception for all flowdyn related errors
    """


class ValueError(BuildInValueError, FlowDynError):
    """exception for all values related errors

    """


class TypeError(BuildInTypeError, FlowDynError):
    """exception for all type related errors

    """


class NumericalDegeneracyError(FlowDynError):
    """A covariance matrix is singular or not positive-definite.

    """


class FitFailureError(FlowDynError):
    """No mixture could be fitted to the given samples.

    """


class UndefinedMetricError(FlowDynError):
    """The metric has no value, for example a covered-only score with no covered points.

    """


class CapacityMismatchError(ValueError):
    """Two reservoir buffers with different capacities cannot be merged.

    """


class UnknownNodeError(ValueError):
    """A pose event references a navigational node that does not exist.

    """


class DuplicateNodeError(ValueError):
    """A navigational node with the same id already exists or existed before.

    """


class ParseError(ValueError):
    """An input file could not be parsed.

    :param message: what went wrong
    :param line_number: 1-based line of the offending row, if known
    """

    def __init__(self, message: str, line_number: int = None) -> None:
        if line_number is not None:
            message = "line {}: {}".format(line_number, message)
        super().__init__(message)
        self.line_number: int = line_number


class ConfigError(ValueError):
    """A configuration or scenario file is invalid.

    """
