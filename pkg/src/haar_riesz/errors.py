"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain input."""


class ConvergenceError(RuntimeError):
    """An iterative numeric routine exhausted its iteration cap."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; indicates a bug, not bad input."""
