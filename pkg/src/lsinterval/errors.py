"""Exception hierarchy.

Every domain failure derives from :class:`LsError` (itself a ``ValueError``)
so callers can catch the whole family at once.
"""
from __future__ import annotations


class LsError(ValueError):
    pass


class TruncationMismatch(LsError):
    pass


class NegativePower(LsError):
    pass


class NegativeIndex(LsError):
    pass


class DegreeError(LsError):
    pass


class UnitTermError(LsError):
    pass


class NotUnipotent(LsError):
    pass


class NotMaurerCartan(LsError):
    pass


class NoSolution(LsError):
    """No Maurer-Cartan element has the requested linear part.

    ``witness`` is a human-readable statement of the violated constraint.
    """

    def __init__(self, message: str, witness: str = ""):
        super().__init__(message)
        self.witness = witness


class FamilyViolation(LsError):
    pass


class DisconnectedComponents(LsError):
    pass


class ConsistencyError(LsError):
    """An internal cross-check failed; this indicates a bug, not bad input."""


class CertificationError(LsError):
    pass


class UnknownSymbol(LsError):
    pass


class ParseError(LsError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class SchemaError(LsError):
    pass


class NonReducedCoefficient(SchemaError):
    pass


class DuplicateWord(SchemaError):
    pass
