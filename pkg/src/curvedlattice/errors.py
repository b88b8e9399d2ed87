"""Exception types shared across the package."""

__all__ = ["ConvergenceError"]


class ConvergenceError(RuntimeError):
    """A numerical routine failed to reach its accuracy target.

    Carries the operation name and the achieved residual (and, when
    meaningful, the iteration count) so callers can report diagnostics.
    """

    def __init__(self, operation, message, residual=None, iterations=None):
        self.operation = operation
        self.residual = residual
        self.iterations = iterations
        detail = message
        if residual is not None:
            detail += f" (residual {residual:.3e})"
        if iterations is not None:
            detail += f" after {iterations} iterations"
        super().__init__(f"{operation}: {detail}")
