"""Exception hierarchy. The CLI maps each class to its own exit code."""


class RankOneError(Exception):
    exit_code = 5


class ParseError(RankOneError, ValueError):
    exit_code = 2

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class InsolubleError(RankOneError):
    """Raised when an operation needs a soluble equation and gets another."""

    exit_code = 3


class PrecisionError(RankOneError):
    """The working precision cannot certify the requested answer."""

    exit_code = 4


class ConsistencyError(RankOneError):
    """An internal cross-check failed; this indicates a bug or a broken hypothesis."""

    exit_code = 5


class ContextError(RankOneError, ValueError):
    """Operands belong to different rings."""

    exit_code = 5
