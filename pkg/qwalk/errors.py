"""Exception hierarchy for qwalk.

Every failure raised by the library derives from QwalkError so the CLI can map
it onto an exit code.
"""

from typing import Optional


class QwalkError(Exception):
    """Base class for all qwalk errors."""
    pass


class GroupError(QwalkError):
    """Raised for bad group descriptors, element arity or context mismatch."""
    pass


class ShapeMismatchError(QwalkError, ValueError):
    """Raised when matrix or model shapes are incompatible."""
    pass


class HadamardValidationError(QwalkError):
    """Raised when a matrix expected to be complex Hadamard is not."""
    pass


class PhaseMatrixError(QwalkError):
    """Raised for malformed or non-dephased parameter matrices."""
    pass


class ModelInvariantError(QwalkError):
    """Raised when a constructed model fails the magic invariants."""
    pass


class ResourceCapExceeded(QwalkError):
    """Raised when a computation would exceed a configured size cap."""

    def __init__(self, what: str, requested: int, cap: int):
        self.what = what
        self.requested = int(requested)
        self.cap = int(cap)
        super().__init__(f"{what}: requested {self.requested} exceeds cap {self.cap}")


class EigenSolverError(QwalkError):
    """Raised when an eigensolve does not converge."""
    pass


class PartitionError(QwalkError):
    """Raised for invalid set partitions or out-of-range sizes."""
    pass


class QuadratureError(QwalkError):
    """Raised when adaptive quadrature fails to converge."""
    pass


class VerificationError(QwalkError):
    """Raised when a verification check fails and raising was requested."""

    def __init__(self, message: str, failures: Optional[list] = None):
        self.failures = failures or []
        super().__init__(message)
