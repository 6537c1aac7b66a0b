"""Shared exception types."""


class EnumerationCapError(RuntimeError):
    """An operation would enumerate more states than its configured cap allows."""


class MeasureFormatError(ValueError):
    """A serialized measure, point, or fraction string failed to parse."""
