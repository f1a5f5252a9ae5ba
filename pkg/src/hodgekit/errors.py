"""Exception types.

``InputError`` is for malformed or out-of-domain input (CLI exit code 2).
``ConstructionError`` is raised when an object fails one of its invariants
and carries the re-checkable witness.  ``TheoremViolation`` signals that two
routes which must agree did not; it should never fire on valid instances.
"""
from __future__ import annotations


class HodgekitError(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(HodgekitError, ValueError):
    """Malformed input.  ``field`` names the offending location when known."""

    def __init__(self, message: str, field: str | None = None, witness=None):
        if field:
            message = f"{field}: {message}"
        super().__init__(message, witness)
        self.field = field


class NotNefError(InputError):
    pass


class ConstructionError(HodgekitError):
    pass


class PreconditionError(HodgekitError):
    pass


class TheoremViolation(HodgekitError):
    pass
