"""Exception types raised across the package."""


class PadicDynError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(PadicDynError, ArithmeticError):
    """Cancellation left no significant digits; the result may or may not be zero."""


class DivisionByZero(PadicDynError, ZeroDivisionError):
    pass


class DomainMismatch(PadicDynError, ValueError):
    pass


class IndexOutOfDomain(PadicDynError, IndexError):
    pass


class WrongDomain(PadicDynError, ValueError):
    pass


class FieldMismatch(PadicDynError, ValueError):
    pass


class NotInC0(PadicDynError, ValueError):
    """A sequence does not tend to zero, so it has no sup norm in c0."""


class Unsupported(PadicDynError, ValueError):
    """The operation is only defined for the characterized operator families."""


class PrecedenceViolation(PadicDynError, ValueError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"|a_n| > |b_n| fails at n = {index}")


class HypothesisViolated(PadicDynError, ValueError):
    pass


class ParameterViolation(PadicDynError, ValueError):
    pass


class ZeroVector(PadicDynError, ValueError):
    pass


class ZeroScalar(PadicDynError, ValueError):
    pass


class NotFound(PadicDynError):
    """A bounded search ended without a witness. This is inconclusive, not a disproof."""

    def __init__(self, n_max):
        self.n_max = n_max
        super().__init__(f"no witness found for n <= {n_max}")


class OrbitError(PadicDynError):
    def __init__(self, n, cause):
        self.n = n
        self.cause = cause
        super().__init__(f"orbit computation failed at n = {n}: {cause}")


class ParseError(PadicDynError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = "" if line is None else f"line {line}" + ("" if column is None else f", col {column}") + ": "
        super().__init__(where + message)


class ValidationError(PadicDynError, ValueError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(field)
        super().__init__((": ".join([", ".join(loc), message])) if loc else message)
