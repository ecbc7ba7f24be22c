"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class AuditError(Exception):
    """Base class for all errors raised by tzl."""


class DomainError(AuditError, ValueError):
    """An argument lies outside the region an operation is defined on."""


class TableRangeError(DomainError, IndexError):
    """A query reaches past the limit of a SieveTable."""


class ResourceError(AuditError, RuntimeError):
    """A request would exceed a configured resource budget."""


class ExtensionError(DomainError):
    """No candidate power produced an admissible extension.

    ``obstructions`` maps each tried exponent ``l`` to the
    ``(witness_prime, residues)`` pair that blocked it.
    """

    def __init__(self, message, obstructions):
        super().__init__(message)
        self.obstructions = obstructions
