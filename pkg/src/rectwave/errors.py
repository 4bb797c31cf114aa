"""Exception types shared across the package."""


class RectwaveError(ValueError):
    """Base class for all rectwave errors."""


class UnknownBankError(RectwaveError):
    """Requested built-in filter bank does not exist."""


class FilterSpecError(RectwaveError):
    """Malformed filter-spec document."""


class FilterValidationError(RectwaveError):
    """Filter bank fails biorthogonality or moment validation."""


class TransformError(RectwaveError):
    """Invalid transform request (length, divisibility, boundary)."""


class SelectionError(RectwaveError):
    """Invalid coefficient-selection request."""


class PgmError(RectwaveError):
    """Malformed PGM stream."""


class CoeffDumpError(RectwaveError):
    """Malformed coefficient dump."""
