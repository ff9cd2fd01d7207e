"""Exception hierarchy shared by every module."""


class CircuitError(Exception):
    """Base class for all errors raised by circuit_fsm."""


class PinMismatch(CircuitError):
    """A sample, trace or stimulus does not cover exactly the declared pins."""


class UnknownPin(CircuitError):
    pass


class EmptyTrace(CircuitError):
    pass


class StateBudgetExceeded(CircuitError):
    """Reachable-state enumeration ran past its budget (machine may be infinite)."""


class ElementBudgetExceeded(CircuitError):
    pass


class SpecInvalid(CircuitError):
    pass


class ParseError(CircuitError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(CircuitError):
    pass


class UnknownProperty(CircuitError):
    pass
