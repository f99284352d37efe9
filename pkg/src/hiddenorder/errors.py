"""Exception hierarchy shared by every stage of the pipeline."""


class HiddenOrderError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 1


class InsufficientData(HiddenOrderError, ValueError):
    exit_code = 4


class DivergenceError(HiddenOrderError, ArithmeticError):
    exit_code = 6


class NoMaxima(HiddenOrderError, ValueError):
    exit_code = 5


class NoScalingRegion(HiddenOrderError, ValueError):
    exit_code = 5


class BadProjection(HiddenOrderError, ValueError):
    exit_code = 5


class EmptyInput(HiddenOrderError, ValueError):
    exit_code = 3


class ParseError(HiddenOrderError, ValueError):
    """Input file could not be parsed; carries the offending 1-based line."""

    exit_code = 3

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
