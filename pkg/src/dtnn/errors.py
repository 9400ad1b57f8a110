"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Array dimensions do not conform to the operation."""


class NumericError(RuntimeError):
    """A numeric invariant broke: non-finite values, excessive imaginary residue."""


class InvalidProblemError(ValueError):
    """The completion problem is ill-posed (e.g. no observed entries)."""


class MetricUndefinedError(ValueError):
    """A metric has no value on the given inputs (e.g. MAPE with all-zero reference)."""


class FormatError(ValueError):
    """A serialized file violates its format. ``offset`` is the offending byte."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset
