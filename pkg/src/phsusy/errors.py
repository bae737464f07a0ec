"""Exception hierarchy shared by every module."""


class PHSusyError(Exception):
    """Base class for all toolkit errors."""


class InvalidParams(PHSusyError, ValueError):
    """Hamiltonian parameters violate a validity rule."""


class DomainError(PHSusyError, ValueError):
    """The metric ansatz has no real solution at the requested point."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument


class DegenerateError(PHSusyError, ZeroDivisionError):
    """A denominator in a closed-form relation vanishes."""


class ConsistencyError(PHSusyError, ArithmeticError):
    """Two independent evaluation routes disagree beyond tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ParityError(PHSusyError, TypeError):
    """A Grassmann coefficient has no definite parity."""


class AmplitudeError(PHSusyError, ValueError):
    """Coherent amplitude too large for the boson truncation."""


class QuadratureError(PHSusyError, RuntimeError):
    """Node doubling changed the quadrature result too much."""
