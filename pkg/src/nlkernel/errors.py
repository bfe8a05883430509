"""Exception types shared across the package."""


class SingularInputError(ValueError):
    """Input lies on a singular locus of a closed-form expression."""


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature hit its depth limit before reaching the tolerance.

    Carries the best available estimate so callers can decide whether the
    achieved accuracy is still useful.
    """

    def __init__(self, message: str, estimate: float, error_estimate: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class StepSizeUnderflowError(RuntimeError):
    """The adaptive integrator could not make progress (stiffness guard)."""

    def __init__(self, message: str, last_r: float):
        super().__init__(message)
        self.last_r = last_r
