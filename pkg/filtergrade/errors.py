from __future__ import annotations


class FilterGradeError(ValueError):
    """
    Base class for errors raised by filtergrade.
    """


class RingMismatchError(FilterGradeError):
    pass


class NotAdmissibleError(FilterGradeError):
    def __init__(self, detail: str = ""):
        message = "N outside admissible class"
        super().__init__(f"{message}: {detail}" if detail else message)


class WindowSizeError(FilterGradeError):
    pass


class InconsistentCertificatesError(FilterGradeError):
    """
    Two computations that must agree returned different answers.
    """


class SessionSyntaxError(FilterGradeError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class CommandError(FilterGradeError):
    def __init__(self, index: int, command: str, cause: Exception):
        self.index = index
        self.command = command
        self.cause = cause
        super().__init__(f"command {index} ({command}) failed: {cause}")
