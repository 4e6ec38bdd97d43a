class CapError(Exception):
    """Base class for errors raised by capmeasure."""


class InvalidElement(CapError, ValueError):
    pass


class CarrierMismatch(CapError, ValueError):
    pass


class AxiomViolation(CapError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CoverageError(CapError, ValueError):
    pass


class NotSurjective(CapError, ValueError):
    pass


class BudgetExceeded(CapError, RuntimeError):
    def __init__(self, message, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class UnknownTheorem(CapError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown theorem"


class ParseError(CapError, ValueError):
    """Malformed space or map file; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path, self.line, self.column, self.reason = path, line, column, message
        where = ":".join(str(p) for p in (path, line, column) if p is not None)
        super().__init__(f"{where}: {message}" if where else message)
