"""Exception hierarchy for qboolean."""

from __future__ import annotations


class QBooleanError(Exception):
    """Base class for all library errors."""


class ValidationError(QBooleanError, ValueError):
    """Raised when an argument or input file is outside the accepted domain."""


class DimensionError(ValidationError):
    """Raised on mismatched qubit counts or matrix shapes."""


class NotQuantumBooleanError(ValidationError):
    """Raised when an operator fails a Hermitian, projector or quantum Boolean precondition."""


class DegreeError(ValidationError):
    """Raised when an operator has Fourier weight above the declared degree."""


class NumericalError(QBooleanError, ArithmeticError):
    """Raised when an identity verified on every call does not hold numerically."""
