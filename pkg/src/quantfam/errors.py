"""Exception types raised across the package."""


class QuantFamError(Exception):
    """Base class for all package errors."""


class InvalidParameter(QuantFamError, ValueError):
    """A family parameter violates its admissible range."""

    def __init__(self, field, value, bound):
        self.field = field
        self.value = value
        self.bound = bound
        super().__init__(f"invalid {field}={value!r}: requires {bound}")


class NotInSupport(QuantFamError, ValueError):
    """A value lies outside the range of the transform."""


class NoConvergence(QuantFamError, RuntimeError):
    """An iterative routine exhausted its iteration budget."""

    def __init__(self, message, iters=None):
        self.iters = iters
        super().__init__(message)


class MomentDoesNotExist(QuantFamError, ValueError):
    """The requested moment is infinite for these parameters."""


class Divergent(MomentDoesNotExist):
    """A numerical moment integral does not decay in the tails."""


class UnsupportedFamily(QuantFamError, ValueError):
    """The operation is not defined for the given family."""


class TooFewObservations(QuantFamError, ValueError):
    """The sample is too small for the requested statistic."""


class DegenerateSample(QuantFamError, ValueError):
    """The sample has no spread (or otherwise cannot be fitted)."""


class InfeasibleRatios(QuantFamError, ValueError):
    """Sample L-moment ratios lie outside the attainable region."""


class ConstraintViolation(QuantFamError, ValueError):
    """Parameters violate the constraints of a closed-form expression."""


class PoleInput(QuantFamError, ValueError):
    """A special function was evaluated at one of its poles."""


class NonFiniteObjective(QuantFamError, ValueError):
    """An objective function returned a non-finite value at the start point."""


class NoRoot(QuantFamError, RuntimeError):
    """A root search failed from every starting point."""


class AllPointsOutsideSupport(QuantFamError, ValueError):
    """No observation lies inside the support of the candidate model."""
