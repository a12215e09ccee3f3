"""Exception hierarchy shared by every module."""


class TorsionLabError(Exception):
    pass


class ShapeError(TorsionLabError, ValueError):
    pass


class BasisError(TorsionLabError, ValueError):
    pass


class NoSolutionError(TorsionLabError, ValueError):
    pass


class ValidationError(TorsionLabError, ValueError):
    pass


class DegeneracyError(TorsionLabError, ValueError):
    pass


class AcyclicityError(TorsionLabError, ValueError):
    """Raised when an operation needs vanishing cohomology.

    ``dims`` carries the cohomology dimensions that were found.
    """

    def __init__(self, dims, message=None):
        self.dims = list(dims)
        super().__init__(message or f"complex is not acyclic; H dims: {self.dims}")


class PoleError(TorsionLabError, ZeroDivisionError):
    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"denominator vanishes at {point}")


class ParseError(TorsionLabError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class InternalError(TorsionLabError, RuntimeError):
    pass
