"""Exception taxonomy shared across the package."""


class SolitonLabError(Exception):
    """Base class for all package-specific errors."""


class SchoutenSingular(SolitonLabError):
    """The phase-plane system divides by (1 - 2*m*rho), which vanishes here."""


class NotSteady(SolitonLabError):
    """Operation requires lambda = 0."""


class DenominatorZero(SolitonLabError):
    """Scalar phase ODE evaluated where its denominator vanishes."""

    def __init__(self, x, u, message=None):
        self.x = x
        self.u = u
        super().__init__(message or f"denominator vanishes at (x, y) = ({x}, {u})")


class OutOfRegime(SolitonLabError):
    """Parameters lie outside the regime the operation is defined for."""


class BlowUpError(SolitonLabError):
    """Trajectory norm exceeded the blow-up threshold."""


class StepLimitError(SolitonLabError):
    """Integrator exceeded its step budget."""


class IntegratorError(SolitonLabError):
    """The underlying stepper failed to advance."""


class OutOfRangeError(SolitonLabError):
    """Evaluation outside a trajectory's or profile's covered range."""


class NotConverged(SolitonLabError):
    """Epsilon-family limit has no converged region at the given tolerance."""

    def __init__(self, message, worst_points=None):
        super().__init__(message)
        self.worst_points = worst_points or []


class AnchoringFailed(SolitonLabError):
    """Warping factor does not extrapolate to zero at the tip."""


class NonpositiveTipCurvature(SolitonLabError):
    """Scalar curvature extrapolated at the tip is not positive."""


class NoEventWithinSpan(SolitonLabError):
    """Expected terminal event did not fire; enlarge the time span."""


class NonpositiveData(SolitonLabError):
    """Log-log fit requires strictly positive data on the tail."""


class TailTooShort(SolitonLabError):
    """Trajectory tail too short for asymptotic diagnostics."""


class InvalidParameters(SolitonLabError):
    """Parameter combination admits no solution of the requested form."""


class GaugeViolation(SolitonLabError):
    """Profile does not satisfy the required normalization gauge."""


class EvaluationError(SolitonLabError):
    """A user-supplied coefficient callback failed or returned non-finite data."""
