"""Exception types shared across the package.

Validation failures (bad dimensions, bad parameter values, inconsistent
inputs) derive from ValueError; unreadable or missing input files derive
from OSError.  The CLI maps the former to exit code 3 and the latter to
exit code 2.
"""


class OddDimensionError(ValueError):
    """A grid dimension is odd where an even size is required."""


class DimensionMismatchError(ValueError):
    """Two grids that must share a shape do not."""


class NonRealResultError(ValueError):
    """An inverse transform produced a significant imaginary part,
    indicating a Hermitian-symmetry violation upstream."""


class NegativeMagnitudeError(ValueError):
    """A magnitude grid contains negative values."""


class EmptyListError(ValueError):
    """An input collection that must be nonempty is empty."""


class EmptyDirectoryError(OSError):
    """An input directory contains no readable images."""


class UnreadableImageError(OSError):
    """An image file exists but cannot be decoded."""


class DatasetGenerationError(RuntimeError):
    """Dataset generation aborted partway; carries the count of outputs
    written before the failure."""

    def __init__(self, message: str, completed: int = 0, total: int = 0):
        super().__init__(message)
        self.completed = completed
        self.total = total
