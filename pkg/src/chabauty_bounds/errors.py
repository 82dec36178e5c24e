"""Exception hierarchy; the CLI maps each class to an exit code."""


class ChabautyError(Exception):
    exit_code = 1


class SchemaError(ChabautyError, ValueError):
    """Malformed input: bad rational syntax, bad JSON shape, bad flag."""

    exit_code = 2


class PreconditionError(ChabautyError, ValueError):
    """Input is well formed but violates a mathematical precondition."""

    exit_code = 3


class InvariantBreach(ChabautyError, AssertionError):
    """A theorem-level check failed.  Should never happen."""

    exit_code = 4
