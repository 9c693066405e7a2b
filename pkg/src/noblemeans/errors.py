"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed its configured memory or work cap."""

    def __init__(self, message, largest_feasible=None):
        super().__init__(message)
        self.largest_feasible = largest_feasible


class NumericError(RuntimeError):
    """An iterative numerical procedure failed to converge or validate."""
