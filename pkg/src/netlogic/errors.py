"""Exception hierarchy shared by every module of the package."""


class NetlogicError(Exception):
    """Base class for all errors raised by netlogic."""


class ModelError(NetlogicError, ValueError):
    pass


class EmptyAgents(ModelError):
    pass


class EmptyFeatures(ModelError):
    pass


class InvalidIdentifier(ModelError):
    pass


class DuplicateName(ModelError):
    pass


class UnknownAgent(ModelError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownFeature(ModelError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ThresholdOutOfRange(ModelError):
    pass


class SelfLoopNotAllowed(ModelError):
    """A self-influence pair was given to a model in irreflexive mode."""


class SignatureMismatch(NetlogicError, ValueError):
    pass


class EmptySequence(NetlogicError, ValueError):
    pass


class FormulaSyntaxError(NetlogicError, ValueError):
    """Malformed formula text; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownOperator(FormulaSyntaxError):
    pass


class UnknownKind(NetlogicError, ValueError):
    pass


class BadIndex(NetlogicError, ValueError):
    pass


class BudgetExceeded(NetlogicError, RuntimeError):
    pass


class SearchExhausted(NetlogicError, RuntimeError):
    pass


class InvariantViolation(NetlogicError, AssertionError):
    """A property guaranteed by the theory failed; indicates a bug."""


class IoError(NetlogicError, OSError):
    """A document could not be read or written."""


class ParseError(NetlogicError, ValueError):
    """A model document is malformed; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


BadKind = UnknownKind
