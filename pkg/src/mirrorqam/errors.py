"""Exception types and the CLI exit-code contract."""

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_PARSE_ERROR = 2
EXIT_DIMENSION_ERROR = 3
EXIT_ZERO_MASS = 4
EXIT_INFEASIBLE_CLONING = 5


class PatternParseError(ValueError):
    """Malformed pattern input. Carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionError(ValueError):
    """Width mismatch between patterns, inputs, or register layouts."""


class ZeroMassError(ValueError):
    """Every stored pattern has vanishing retrieval weight; retrieval is impossible."""


class CloningError(ValueError):
    """Base class for failures of the cloning-efficiency constraint."""


class SingularOverlapError(CloningError):
    """Overlap is zero, so the efficiency constraint divides by zero."""


class InfeasibleCloningError(CloningError):
    """A retrieval mode required cloning efficiencies that do not exist."""
