"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation-type errors exit with 2,
numeric failures with 3, and a whole-pipeline failure with 4.
"""


class BartrError(Exception):
    """Base class for all package errors."""


class ValidationError(BartrError, ValueError):
    """Invalid input: bad bounds, malformed records, schema violations."""


class StructuralError(BartrError, ValueError):
    """Kernel expression and hyperparameter vector do not line up."""


class DomainError(ValidationError):
    """A query point lies outside the reaching workspace."""


class IngestError(ValidationError):
    """A session-log file violates the on-disk schema.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericError(BartrError, ArithmeticError):
    """A numerical operation produced non-finite or non-PD results."""


class ConvergenceError(NumericError):
    """An iterative fit failed to converge.

    ``best`` holds the best iterate seen so far (model or parameter
    vector), for post-mortem inspection.
    """

    def __init__(self, message: str, best=None, diagnostics: dict | None = None):
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics or {}


class StateError(BartrError, RuntimeError):
    """An operation was called on an object in the wrong state."""


class ProtocolError(BartrError, RuntimeError):
    """An event arrived that is illegal in the current trial state."""


class DegenerateDataError(ValidationError):
    """A statistic is undefined for this input (zero variance, empty)."""
