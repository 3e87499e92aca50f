"""Exception hierarchy.

``DataError`` subclasses describe problems with input data and map to exit
status 1 in the CLI.  ``StatError`` subclasses are raised by the numerical
kernel on invalid arguments and also derive from ``ValueError``.
"""

from __future__ import annotations


class ProxyvalError(Exception):
    """Base class for all package errors."""

    def to_record(self) -> dict:
        record = {"error": type(self).__name__, "message": str(self)}
        line = getattr(self, "line", None)
        if line is not None:
            record["line"] = line
        return record


class DataError(ProxyvalError):
    pass


class IngestError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingColumn(IngestError):
    pass


class MalformedRow(IngestError):
    pass


class BadDate(IngestError):
    pass


class NonPositiveQuantity(IngestError):
    pass


class DuplicateProductId(IngestError):
    pass


class UnknownCategory(IngestError):
    pass


class UnknownFoodForm(IngestError):
    pass


class NonContiguousMonths(IngestError):
    pass


class NegativeCount(IngestError):
    pass


class UnknownGroup(IngestError):
    pass


class DuplicateAnimalId(IngestError):
    pass


class EmptyInput(IngestError):
    pass


class KeywordConfigError(IngestError):
    pass


class UnknownProductId(DataError):
    pass


class EmptyDenominator(DataError):
    pass


class NoSharedIngredients(DataError):
    pass


class TooFewSignificant(DataError):
    pass


class NoFormKnownPurchases(DataError):
    pass


class EmptyBins(DataError):
    pass


class NoCases(DataError):
    pass


class RangeMismatch(DataError):
    pass


class ConfigInvalid(DataError):
    pass


class StatError(ProxyvalError, ValueError):
    pass


class DomainError(StatError):
    pass


class DegenerateMargin(StatError):
    pass


class DegenerateVariance(StatError):
    pass


class ZeroVariance(StatError):
    pass


class LengthMismatch(StatError):
    pass


class TooFewPoints(StatError):
    pass


class SpanTooSmall(StatError):
    pass


class NonMonotoneX(StatError):
    pass


class SeriesTooShort(StatError):
    pass


class BadSpan(StatError):
    pass
