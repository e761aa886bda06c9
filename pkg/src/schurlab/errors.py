"""Exception hierarchy.

``NumericalError`` subclasses map to CLI exit code 2, ``InputError``
subclasses to exit code 1.
"""


class SchurlabError(Exception):
    pass


class InputError(SchurlabError, ValueError):
    """Malformed or inconsistent input (shape, symmetry, schema, parse)."""


class DimensionError(InputError):
    pass


class SymmetryError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None, path=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path is not None:
            where.append(path)
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.path = path


class NumericalError(SchurlabError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class SingularMatrixError(NumericalError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class SteinSingularError(SingularMatrixError):
    """Raised when some product of eigenvalues equals one."""


class DivergenceError(NumericalError):
    pass


class AnalysisLimitError(NumericalError):
    def __init__(self, message, limit):
        super().__init__(message)
        self.limit = limit
