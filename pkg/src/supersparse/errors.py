"""Exception hierarchy shared by the package."""


class SupersparseError(Exception):
    """Base class for all errors raised by this package."""


class DegreeCapExceeded(SupersparseError, ValueError):
    """Expanding the requested polynomial would exceed the configured degree cap."""


class NoCompanion(SupersparseError, ValueError):
    """The requested polynomial is constant and has no companion matrix."""


class DimensionTooSmall(SupersparseError, ValueError):
    """A composition factor has dimension zero."""


class NotMonic(SupersparseError, ValueError):
    pass


class DegreeZero(SupersparseError, ValueError):
    pass


class HessenbergStructureError(SupersparseError, ValueError):
    """A matrix violates the upper Hessenberg / nonzero subdiagonal invariants."""


class SingularSample(SupersparseError, ZeroDivisionError):
    """The sample point is a root of the characteristic polynomial."""


class BudgetExceeded(SupersparseError, ValueError):
    """The matrix is larger than the exact oracle (or dense solver) budget."""


class ConvergenceFailure(SupersparseError, ArithmeticError):
    """Shifted QR failed to deflate within the iteration cap.

    Attributes
    ----------
    index : int
        1-based index of the trailing row that would not deflate.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class EvaluationOverflow(SupersparseError, OverflowError):
    """Floating point evaluation left the representable range."""
