"""Exception hierarchy for the dual_darboux kernel."""


class DualDarbouxError(Exception):
    """Base class for every error raised by this package."""


class PureDualDivision(DualDarbouxError, ZeroDivisionError):
    """Division by a dual number with (near) zero real part."""


class DomainError(DualDarbouxError, ValueError):
    """An analytic function was evaluated outside its real domain."""


class OrderMismatch(DualDarbouxError, ValueError):
    """Jets of different truncation order were combined."""


class PureDualVector(DualDarbouxError, ValueError):
    """A dual vector with vanishing real part was normalized or measured."""


class ParallelLines(DualDarbouxError, ValueError):
    """Two lines are parallel, so their common perpendicular is undefined."""


class ZeroDirection(DualDarbouxError, ValueError):
    """A line was requested with a zero direction vector."""


class NotAUnitLine(DualDarbouxError, ValueError):
    """A dual vector violates the unit / orthogonal-moment conditions of a line."""


class ExprSyntaxError(DualDarbouxError, ValueError):
    """Malformed curve expression.

    ``offset`` is the byte offset in the source text where parsing failed.
    """

    def __init__(self, message, offset, text=""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


class UnknownIdentifier(ExprSyntaxError):
    """An identifier other than ``u``, ``pi`` or a known function name."""


class CylindricalDirector(DualDarbouxError, ValueError):
    """The director indicatrix is stationary (the surface is locally cylindrical)."""


class QuadratureFailure(DualDarbouxError, RuntimeError):
    """Adaptive quadrature could not reach its tolerance within the depth limit."""


class DegenerateOffset(DualDarbouxError, ValueError):
    """The offset indicatrix stalls or reverses: cos(theta) + gamma sin(theta) <= tol."""


class NoSolution(DualDarbouxError, ValueError):
    """A closed-form solve hit a pole."""


class NotDevelopableBase(DualDarbouxError, ValueError):
    """An operation requiring a developable base surface got a skew one."""


class ConfigParseError(DualDarbouxError, ValueError):
    """Config text could not be parsed; carries line and column when known."""

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ConfigValidationError(DualDarbouxError, ValueError):
    """Config parsed but a field is invalid; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
