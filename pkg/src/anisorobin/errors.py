"""Exception types shared across the package."""


class InvalidPolygonError(ValueError):
    """Vertex list does not describe a strictly convex CCW polygon."""


class OutsideDomainError(ValueError):
    """Query point lies outside the polygon."""


class IsoperimetricViolationError(RuntimeError):
    """L0^2 - 4*kappa*A went significantly negative; geometry code is broken."""


class NoRootError(RuntimeError):
    """Secular equation bracketing found no sign change in range."""


class SolverError(RuntimeError):
    """Linear/eigen solver failure."""


class NonConvergenceError(SolverError):
    """Iteration hit max_iters before meeting the tolerance.

    Carries the last iterate so callers can inspect it.
    """

    def __init__(self, message, last_solution=None):
        super().__init__(message)
        self.last_solution = last_solution


class ConfigError(ValueError):
    """Malformed run configuration (CLI)."""
