"""Exception types shared across the package.

The CLI maps these onto exit codes: input problems (parsing, schema) exit
with 3, solver-side failures (size caps, numeric breakdown) with 4.
"""


class DwellrouteError(Exception):
    """Base class for all package-specific errors."""


class InstanceInputError(DwellrouteError):
    """Base for errors while ingesting instance files."""


class TsplibFormatError(InstanceInputError):
    """Instance declares a feature we do not support (e.g. GEO weights)."""


class TsplibParseError(InstanceInputError):
    """Structurally broken TSPLIB text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(InstanceInputError):
    """JSON instance document violates the expected schema."""


class CapacityError(DwellrouteError):
    """Problem size exceeds a hard cap of an exact solver."""


class NumericsError(DwellrouteError):
    """An optimizer produced a non-finite intermediate value."""
