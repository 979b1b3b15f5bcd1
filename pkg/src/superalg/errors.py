"""Exception types shared across the package."""


class SuperalgError(Exception):
    """Base class for package errors."""


class DSLError(SuperalgError):
    """An error located in definition text."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class LexError(DSLError):
    pass


class ParseError(DSLError):
    pass


class SemanticError(DSLError):
    pass


class SpecError(SuperalgError):
    """An algebra or module definition violates a structural invariant."""


class InterpolationError(SuperalgError):
    pass
