"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid argument value or inconsistent dimensions."""


class NumericError(RuntimeError):
    """A numerical routine failed to converge or produced invalid output."""


class DegenerateGeometryError(ValueError):
    """Input geometry is rank deficient."""


class CapacityError(ValueError):
    """An exhaustive computation would exceed its configured cap."""


class ParseError(ValueError):
    """Malformed text input; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IngestionError(ValueError):
    """Structured input parsed but failed semantic validation."""
