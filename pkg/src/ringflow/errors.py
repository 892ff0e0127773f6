"""Shared exception types (mapped to CLI exit codes)."""


class DimensionCapError(RuntimeError):
    """Requested Hilbert-space dimension exceeds the configured cap."""


class ConvergenceError(RuntimeError):
    """An iterative solve did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
