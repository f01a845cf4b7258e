"""Exception hierarchy.

Argument and domain problems subclass ``ValueError``; everything that goes
wrong inside a numerical procedure subclasses :class:`NumericalError`.  The
CLI maps the first family to exit code 2 and the second to exit code 3.
"""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class NumericalError(ArithmeticError):
    """A numerical procedure could not deliver a result."""


class NoRootError(NumericalError):
    """No sign change was found in the searched interval."""


class ConvergenceError(NumericalError):
    """An iteration hit its cap before meeting its tolerance."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class InfeasibleError(NumericalError):
    """The requested target cannot be reached inside the admissible set."""


class TruncationError(NumericalError):
    """A truncated series is too short for the requested tolerance."""
