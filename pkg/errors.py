"""
Error types. Library modules raise these; runner.py maps them to exit codes.
"""


class LopsimError(Exception):
    """Base class for every simulator error."""


class DimensionError(LopsimError):
    """Shapes or mode counts that do not fit together."""


class SelectionError(DimensionError):
    """Row/column selection out of bounds or of unequal length."""


class DomainError(LopsimError):
    """A parameter outside its physical range (|t| > 1, Θ outside (-2π, 2π), ...)."""


class LossyElementError(DomainError):
    """Beam splitter with t² + r² != 1. Loss is not modeled."""


class ContractError(LopsimError):
    """Input violates a contract the caller was responsible for (e.g. non-unitary U)."""


class ResourceError(LopsimError):
    """Job exceeds a configured photon, mode or enumeration cap."""


class UsageError(LopsimError):
    """Bad command-line usage or malformed input file."""


class CompositionError(UsageError):
    """Gate blocks placed on qubits they cannot share."""
