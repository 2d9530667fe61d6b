"""Exception hierarchy shared by the library and the command-line front-end."""


class ContractsError(Exception):
    """Base class for every error raised by combcontracts."""


class InputError(ContractsError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(InputError):
    """A rational, bitmask or instance document could not be parsed."""


class CapacityError(ContractsError):
    """The ground set is too large for an exhaustive routine."""


class OracleError(ContractsError, RuntimeError):
    """A demand oracle behaved inconsistently (e.g. enumeration failed to terminate)."""
