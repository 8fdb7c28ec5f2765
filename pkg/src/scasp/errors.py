"""Exceptions shared across the package."""

__all__ = ["ScaspError", "CompileError", "SolverError"]


class ScaspError(Exception):
    """Base class for errors raised while processing a program."""


class CompileError(ScaspError):
    """A program cannot be compiled (e.g. it uses a reserved name)."""

    def __init__(self, message, line=0, col=0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(message)


class SolverError(ScaspError):
    """The evaluation hit a documented solver restriction.

    code is a stable identifier such as 'nonground_disequality' or
    'nonlinear_constraint'; the message carries the offending terms.
    """

    def __init__(self, code, message):
        self.code = code
        super().__init__(f"{code}: {message}")
