"""Partition statistics, polylog Bose gas thermodynamics and vanishing-viscosity Burgers tools."""

__version__ = "0.1.0"

from . import bose, burgers, counting, numerics, specfun, thermo  # noqa: E402,F401
from .errors import (  # noqa: E402,F401
    ConvergenceError,
    DomainError,
    InfeasibleError,
    NoRootError,
    NumericalError,
    QuadratureError,
    TruncationError,
)
