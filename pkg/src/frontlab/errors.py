"""Exception types shared across the package."""


class FrontLabError(Exception):
    """Base class for all package errors."""


class ParameterError(FrontLabError, ValueError):
    """A model or run parameter violates a hard constraint."""


class GridResolutionError(FrontLabError, ValueError):
    """Grid cannot resolve the interface or the slow tails."""


class DegenerateParametersError(FrontLabError, ValueError):
    """Parameter combination makes a formula degenerate (e.g. tau_hat == theta_hat)."""


class UnsupportedConfigurationError(FrontLabError, ValueError):
    """Operation is only defined for a restricted configuration (e.g. gamma == 0)."""


class DomainError(FrontLabError, ValueError):
    """Evaluation point lies outside the admissible domain (branch cut)."""


class PreconditionError(FrontLabError, ValueError):
    """A multiplicity or tolerance precondition is violated."""


class SolverError(FrontLabError, RuntimeError):
    """A linear solve or eigenvalue iteration failed."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NonConvergenceError(SolverError):
    """Newton iteration exhausted its budget; carries the residual history."""

    def __init__(self, message, residual_history=None):
        super().__init__(message, {"residual_history": list(residual_history or [])})
        self.residual_history = list(residual_history or [])


class DegenerateStateError(FrontLabError, ValueError):
    """State has no usable translation direction (flat profile)."""


class DivergenceError(FrontLabError, RuntimeError):
    """Time integration blew up; carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class SwitchFailureError(FrontLabError, RuntimeError):
    """Branch switching fell back onto the symmetric branch."""
