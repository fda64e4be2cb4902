"""Exception hierarchy for the symbolic layer."""


class SymbolicError(ValueError):
    """Base class for errors raised by the symbolic layer."""


class ParseError(SymbolicError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(SymbolicError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown variable {name!r}{where}")


class DivisionByZeroError(SymbolicError, ZeroDivisionError):
    """Division by the zero rational function."""


class PoleError(SymbolicError):
    """A denominator vanishes at the requested point."""

    def __init__(self, message: str, point=None):
        self.point = point
        super().__init__(message)
