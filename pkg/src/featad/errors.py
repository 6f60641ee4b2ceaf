"""Exception hierarchy shared by every pipeline stage.

The runner catches ``FeatadError`` per task and turns it into a skip entry,
so every domain failure must derive from it.
"""

from __future__ import annotations


class FeatadError(Exception):
    """Base class for all pipeline errors."""

    @property
    def reason(self) -> str:
        return type(self).__name__


# series_io
class MissingColumn(FeatadError, KeyError):
    pass


class NonFiniteValue(FeatadError, ValueError):
    def __init__(self, row: int, message: str | None = None) -> None:
        self.row = row
        super().__init__(message or f"non-finite value at row {row}")


class BadLabel(FeatadError, ValueError):
    def __init__(self, row: int, message: str | None = None) -> None:
        self.row = row
        super().__init__(message or f"label at row {row} is not 0/1")


class EmptySeries(FeatadError, ValueError):
    pass


class BadFilenameConvention(FeatadError, ValueError):
    pass


class IndicesOutOfRange(FeatadError, ValueError):
    pass


class MissingLabels(FeatadError, ValueError):
    pass


class DegenerateSeries(FeatadError, ValueError):
    pass


class TooShort(FeatadError, ValueError):
    pass


# windowing / normalize
class WindowLargerThanSeries(FeatadError, ValueError):
    pass


class UnknownMethod(FeatadError, ValueError):
    pass


# features
class WindowTooSmall(FeatadError, ValueError):
    pass


class UnknownFeature(FeatadError, KeyError):
    pass


class EmptyCatalog(FeatadError, ValueError):
    pass


class AllColumnsDropped(FeatadError, ValueError):
    pass


# detectors
class DegenerateInput(FeatadError, ValueError):
    pass


class NonFiniteInput(FeatadError, ValueError):
    pass


class DimensionMismatch(FeatadError, ValueError):
    pass


class TooFewRows(FeatadError, ValueError):
    pass


# evaluation
class SingleClass(FeatadError, ValueError):
    pass


class UndefinedEntry(FeatadError, ValueError):
    pass


class AllZeroDifferences(FeatadError, ValueError):
    pass


class UnsupportedM(FeatadError, ValueError):
    pass


class InsufficientData(FeatadError, ValueError):
    pass


# runner
class ConfigError(FeatadError, ValueError):
    pass
