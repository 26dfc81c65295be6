"""Exception types shared across the package."""


class HelmlapError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HelmlapError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class StackValidationError(HelmlapError, ValueError):
    """A layer-stack document violates a structural invariant."""


class SingularSystemError(HelmlapError, RuntimeError):
    """The assembled linear system is (numerically) singular.

    Carries the smallest singular value so callers can distinguish a true
    resonance from a borderline conditioning problem.
    """

    def __init__(self, message, smallest_singular_value=None, matrix_norm=None):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value
        self.matrix_norm = matrix_norm


class NoRootError(HelmlapError, RuntimeError):
    """A bracketing scan found no sign change for a root that was expected."""

    def __init__(self, message, scan_min=None, scan_max=None, scan_points=None):
        super().__init__(message)
        self.scan_min = scan_min
        self.scan_max = scan_max
        self.scan_points = scan_points


class ConvergenceError(HelmlapError, RuntimeError):
    """An iterative search or a Cauchy sequence failed to settle."""


class UsageError(HelmlapError, ValueError):
    """Bad command-line usage (unknown flag, missing argument)."""
