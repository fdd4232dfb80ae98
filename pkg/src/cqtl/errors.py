"""Exception hierarchy shared by every layer of the checker."""

from __future__ import annotations


class CqtlError(Exception):
    """Base class for all errors raised by this package."""


# -- signatures and terms ----------------------------------------------------

class SignatureError(CqtlError):
    pass


class DuplicateSort(SignatureError):
    pass


class DuplicateFunction(SignatureError):
    pass


class UnknownSortReference(SignatureError):
    pass


class TypingError(CqtlError):
    pass


class UnboundVariable(TypingError):
    pass


class ArityMismatch(TypingError):
    pass


class SortMismatch(TypingError):
    pass


class MissingBinding(TypingError):
    pass


class DuplicateBinder(TypingError):
    pass


# -- models --------------------------------------------------------------------

class ModelError(CqtlError):
    pass


class PartialTableEntry(ModelError):
    pass


class HomomorphismViolation(ModelError):
    def __init__(self, message, *, symbol=None, args=None, transition=None):
        super().__init__(message)
        self.symbol = symbol
        self.tuple = args
        self.transition = transition


class DanglingWorldRef(ModelError):
    pass


class UnknownWorld(ModelError):
    pass


class NonComposablePath(ModelError):
    pass


# -- formulas --------------------------------------------------------------------

class FormulaSyntaxError(CqtlError):
    """Raised by the formula parser; ``pos`` is a 0-based character offset."""

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at column {pos + 1})"
        super().__init__(message)


class NegationBelowTemporal(FormulaSyntaxError):
    pass


class MacroArityMismatch(CqtlError):
    pass


class UnknownMacro(CqtlError):
    pass


# -- evaluation ----------------------------------------------------------------

class ContextMismatch(CqtlError):
    pass


class StateSpaceCap(CqtlError):
    """Second-order enumeration or configuration graph exceeds the configured cap."""


# -- text formats ----------------------------------------------------------------

class ParseError(CqtlError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class ValidationError(CqtlError):
    """A model document parsed but describes an invalid counterpart model."""

    def __init__(self, message, cause=None, line=None):
        self.cause = cause
        self.line = line
        if line is not None:
            message = f"{line}: {message}"
        super().__init__(message)
