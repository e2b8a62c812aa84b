"""Exception types shared across the library."""


class AstriplesError(Exception):
    """Base class for all library errors."""


class StructuralError(AstriplesError, ValueError):
    """Malformed input: not a partition, bad coordinates, bad file shape."""


class PreconditionError(AstriplesError, ValueError):
    """An operation was called outside its stated contract."""


class RefusalError(AstriplesError):
    """Well-formed input that fails a mathematical requirement.

    Carries a small witness of the failure when one is available.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeGuardError(AstriplesError, RuntimeError):
    """A resource guard (group size, enumeration scale) was exceeded."""


class ConsistencyError(AstriplesError, RuntimeError):
    """An internal invariant failed; signals a bug or a falsified theorem."""
