class AfecheckError(Exception):
    """Base class for all errors raised by afecheck."""


class InputError(AfecheckError):
    """Input could not be turned into a valid graph or language."""


class InputSyntaxError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(InputError):
    """A structural invariant of a labeled graph or language is violated.

    ``invariant`` is a short machine-readable tag such as ``"sink"``.
    """

    def __init__(self, invariant, message):
        self.invariant = invariant
        super().__init__(message)


class AlphabetError(InputError):
    """A word uses a letter outside the alphabet."""


class BoundExceeded(AfecheckError):
    """A computation hit an explicit size or depth budget."""


class HypothesisError(AfecheckError):
    """An operation was called on an input violating its precondition."""
