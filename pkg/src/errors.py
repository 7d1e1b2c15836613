"""
Errors Module - Exception hierarchy for the qcg3 package.

Every failure raised by the library derives from QcgError so that callers
(and the command-line front end) can map error families to exit codes.
"""

from __future__ import annotations

from typing import Optional


class QcgError(Exception):
    """Base class for all qcg3 errors."""


class DomainError(QcgError, ValueError):
    """An argument lies outside the domain of an operation.

    Raised for negative factorial arguments, channel indices outside
    [0, min(n1, n2)], weights outside a diagram and malformed
    half-integers.
    """


class ConfigError(QcgError, ValueError):
    """A run configuration is invalid (bad q, precision, format or size)."""


class BackendMismatchError(QcgError, TypeError):
    """Arithmetic was attempted between scalars of different backends."""


class ExactArithmeticError(QcgError, ArithmeticError):
    """The exact scalar field cannot perform the requested operation."""


class InvalidPathError(QcgError):
    """A lowering sequence stepped past the end of a weight string."""


class LinearDependenceError(QcgError):
    """Gram-Schmidt met a candidate inside the span of the previous ones."""


class VerificationError(QcgError):
    """An oracle residual exceeded its tolerance.

    Attributes:
        residual: Name of the first failing residual
        value: Its value rendered as a decimal string
    """

    def __init__(self, residual: str, value: Optional[str] = None):
        """
        Initialize the verification error.

        Args:
            residual: Name of the first failing residual
            value: Decimal rendering of the failing value
        """
        self.residual = residual
        self.value = value
        detail = f" = {value}" if value is not None else ""
        super().__init__(f"verification failed: {residual}{detail}")
