class QecSimulationError(Exception):
    """Base class for every error raised by the simulator."""


class DimensionMismatchError(QecSimulationError, ValueError):
    """Raised when mode counts or array shapes of two operands do not agree."""


class DomainError(QecSimulationError, ValueError):
    """Raised when a parameter lies outside the domain of an operation."""


class ProbabilitySumError(DomainError):
    """Raised when branch probabilities of a mixture do not sum to one."""


class UnphysicalStateError(QecSimulationError, ValueError):
    """Raised when a covariance matrix is not symmetric or violates the uncertainty relation."""


class ConditioningError(QecSimulationError, ArithmeticError):
    """Raised when a homodyne outcome has zero total density under a mixture."""


class UnsupportedReplacementError(QecSimulationError, ValueError):
    """
    Raised when a replacement branch targets a mode that is correlated with the rest.

    Replacing the marginal of a correlated mode is not a component-wise update of a
    Gaussian mixture, so the operation is refused instead of silently dropping the
    correlations.
    """


class NumericalFailureError(QecSimulationError, ArithmeticError):
    """Raised when a computation produces a singular matrix or a non-finite value."""
