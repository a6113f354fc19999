"""Exception hierarchy for the trendsketch package."""


class TrendsketchError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TrendsketchError):
    """A domain object violates one of its invariants."""


class RangeViolationError(ValidationError):
    """Global normalization extents are narrower than a signal's range."""

    def __init__(self, axis: str, message: str | None = None):
        self.axis = axis
        super().__init__(message or f"signal exceeds global extents on axis {axis!r}")


class DegenerateSegmentError(ValidationError):
    """A segment has zero time extent, so velocity is undefined."""


class DegenerateSketchError(ValidationError):
    """A sketch has fewer than 2 distinct points after deduplication."""


class StaleIndexError(TrendsketchError):
    """Query config (mode, epsilon) does not match the index build config."""


class IngestError(TrendsketchError):
    """CSV/JSON ingestion failed (missing column, bad timestamp, no signals)."""


class ConstraintError(TrendsketchError):
    """Base class for constraint parsing/validation failures."""


class ConstraintSyntaxError(ConstraintError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnknownFieldError(ConstraintError):
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"unknown field {field!r}")


class TypeMismatchError(ConstraintError):
    """Literal type is incompatible with the field it is compared against."""
