"""Error hierarchy shared by the library and the command-line runners.

Each error class carries the process exit code the CLI reports for it.
"""


class SimulationError(Exception):
    """Base class for all errors raised by open_system_pt."""

    exit_code: int = 1


class ArgumentError(SimulationError, ValueError):
    """An argument is out of range or has inconsistent dimensions."""

    exit_code = 2


class ConfigError(SimulationError):
    """A run configuration could not be parsed or validated."""

    exit_code = 2


class ResourceError(SimulationError):
    """A bond or Liouville dimension exceeds the configured cap."""

    exit_code = 3


class NumericalError(SimulationError, ArithmeticError):
    """A numerical routine failed to converge or produced non-finite values."""

    exit_code = 4
