"""Exception hierarchy.  CLI exit codes hang off ``exit_code``."""


class RdsKitError(Exception):
    exit_code = 2


class StructuralError(RdsKitError):
    """Operands live in different group rings."""


class ParameterError(RdsKitError):
    """Parameters are inconsistent with the input or with each other."""


class DomainError(RdsKitError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(RdsKitError):
    """Problem size exceeds a documented cap."""

    exit_code = 3


class VerificationError(RdsKitError):
    """A design failed its defining equation."""

    exit_code = 1


class InvariantViolation(RdsKitError):
    """An internal post-condition failed; indicates a bug."""

    exit_code = 1


class TheoremViolation(InvariantViolation):
    """A theorem's guaranteed object was not found (bug or bad input)."""


class CatalogIOError(RdsKitError):
    """A file could not be read, written, or parsed."""

    exit_code = 4
