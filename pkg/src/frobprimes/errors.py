"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Invalid input to an algebraic operation (ring mismatch, bad rank, ...)."""


class CapabilityError(Exception):
    """The computation left the envelope the implementation can certify."""


class ParseError(ValueError):
    """Malformed polynomial, matrix or problem-file text."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
