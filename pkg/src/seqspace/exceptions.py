class DimensionError(ValueError):
    """Operands have incompatible lengths or matrix dimensions."""


class NumericError(ArithmeticError):
    """A non-finite value appeared while building a matrix entry."""

    def __init__(self, message, n=None, k=None, tau=None):
        super().__init__(message)
        self.n = n
        self.k = k
        self.tau = tau


class SpecError(ValueError):
    """Malformed sequence specification text."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
