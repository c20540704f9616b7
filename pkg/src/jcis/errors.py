"""Exception hierarchy.

Each exception carries the process exit code the command-line front end
reports for it.
"""


class JcisError(Exception):
    exit_code = 1


class ConfigurationError(JcisError, ValueError):
    exit_code = 2


class InputError(JcisError, ValueError):
    """Malformed, non-finite or inconsistent input data."""

    exit_code = 3


class FormatError(InputError):
    exit_code = 3


class DegenerateVarianceError(JcisError, ValueError):
    """A variable has zero variance where a positive one is required."""

    exit_code = 4


class EmptyResultError(JcisError):
    exit_code = 4


class NoCutoffError(JcisError):
    exit_code = 4


class UndefinedBalancedAccuracyError(JcisError, ValueError):
    exit_code = 4
