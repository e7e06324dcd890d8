from __future__ import annotations


class SymgameError(Exception):
    """Base class for every error raised by symgame."""


class DocumentFormatError(SymgameError):
    """A document or textual form could not be parsed."""


class GameValidationError(SymgameError):
    """A parsed game violates the normal-form game invariants."""


class PreconditionError(SymgameError):
    """An operation was called on input outside its domain."""


class LabelMismatchError(PreconditionError):
    pass


class ShapeMismatchError(PreconditionError, ValueError):
    pass


class AssignmentError(PreconditionError):
    pass


class InvalidProfileError(PreconditionError, ValueError):
    pass


class InvalidPlayerError(PreconditionError, ValueError):
    pass


class UnknownFamilyError(PreconditionError, ValueError):
    pass


class SearchBudgetExceeded(SymgameError, RuntimeError):
    pass
