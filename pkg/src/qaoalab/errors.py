"""Exception types raised across the package."""


class QaoaError(Exception):
    """Base class for all package errors."""


class InvalidAssignmentError(QaoaError, ValueError):
    """An assignment does not match the problem's variable count or is not binary."""


class ResourceLimitError(QaoaError):
    """A request would exceed a configured size limit (qubits, grid points)."""


class ShapeError(QaoaError, ValueError):
    """Operands have incompatible dimensions."""


class PreconditionError(QaoaError, ValueError):
    """An input violates a structural precondition of a formula."""


class UnsupportedGateError(QaoaError):
    """A gate cannot be expressed in the requested output dialect."""


class UnsupportedMethodError(QaoaError):
    """An evaluation method does not apply to the given instance."""


class NumericError(QaoaError, ArithmeticError):
    """An objective returned a non-finite value."""

    def __init__(self, message, angles=None):
        super().__init__(message)
        self.angles = angles


class ParseError(QaoaError, ValueError):
    """Malformed problem file. ``lineno`` is 1-based, or None for whole-file errors."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
