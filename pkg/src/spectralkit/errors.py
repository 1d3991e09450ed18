"""Exception hierarchy shared by all subpackages."""


class SpectralKitError(Exception):
    """Base class for every error raised by spectralkit."""


class ConfigurationError(SpectralKitError, ValueError):
    """Inconsistent or invalid parameters."""


class UnknownParameterError(ConfigurationError, AttributeError):
    """A parameter path does not exist in a frozen tree."""


class ParamTypeError(ConfigurationError, TypeError):
    """A value does not match the type of the leaf it is assigned to."""


class ParamsParseError(ConfigurationError):
    """Malformed ``params.txt`` text."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ReadOnlyParamsError(SpectralKitError, AttributeError):
    """Modification attempted on the locked copy held by a simulation."""


class UnknownSolverError(ConfigurationError):
    """Solver short name absent from the registry."""


class ShapeError(SpectralKitError, ValueError):
    """Array or grid extents do not match what an operation expects."""


class DivergenceError(SpectralKitError, ArithmeticError):
    """Non-finite values appeared in the state during time stepping."""

    def __init__(self, iteration, field):
        super().__init__(
            f"simulation diverged: non-finite values in {field!r} "
            f"at iteration {iteration}"
        )
        self.iteration = iteration
        self.field = field


class RecordsError(SpectralKitError, OSError):
    """Simulation output missing or unreadable."""


class SnapshotFormatError(RecordsError):
    """Corrupt snapshot header or truncated payload."""


class DigestMismatchError(SnapshotFormatError):
    """Snapshot written by a simulation with incompatible parameters."""
