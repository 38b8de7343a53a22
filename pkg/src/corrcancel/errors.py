"""Exception hierarchy.

Every exception carries a stable ``code`` string; the CLI maps codes to
report outcomes and process exit statuses.
"""

from __future__ import annotations


class CorrError(Exception):
    """Base class for all domain errors raised by the library."""

    code = "COMPUTATION_ERROR"


class FieldMismatch(CorrError):
    code = "FIELD_MISMATCH"


class UnsupportedBase(CorrError):
    code = "UNSUPPORTED_BASE"


class WrongDimension(CorrError):
    code = "WRONG_DIMENSION"


class DegenerateCoordinates(CorrError):
    """Random primitive-element choices kept failing; retry with new randomness."""

    code = "DEGENERATE_COORDINATES"


class NotDominant(CorrError):
    code = "NOT_DOMINANT"


class NotPrime(CorrError):
    code = "NOT_PRIME"


class NotFinite(CorrError):
    code = "NOT_FINITE"


class NotFlat(CorrError):
    code = "NOT_FLAT"


class NotProperOnSupport(CorrError):
    code = "NOT_PROPER_ON_SUPPORT"


class NotEquidimensional(CorrError):
    code = "NOT_EQUIDIMENSIONAL"


class ImproperIntersection(CorrError):
    code = "IMPROPER_INTERSECTION"


class ZeroRestriction(CorrError):
    code = "ZERO_RESTRICTION"


class SearchExhausted(CorrError):
    code = "SEARCH_EXHAUSTED"


class InvalidMorphism(CorrError):
    code = "INVALID_MORPHISM"


class ScenarioError(CorrError):
    """Problem in a scenario file, located at ``line``/``column`` (1-based)."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)
        self.bare_message = message


class UnknownIdentifier(ScenarioError):
    code = "UNKNOWN_IDENTIFIER"


class DuplicateName(ScenarioError):
    code = "DUPLICATE_NAME"


class ScenarioFieldMismatch(ScenarioError):
    code = "FIELD_MISMATCH"


ERROR_CODES = sorted(
    {
        cls.code
        for cls in [
            CorrError, FieldMismatch, UnsupportedBase, WrongDimension, DegenerateCoordinates,
            NotDominant, NotPrime, NotFinite, NotFlat, NotProperOnSupport, NotEquidimensional,
            ImproperIntersection, ZeroRestriction, SearchExhausted, InvalidMorphism,
            ScenarioError, UnknownIdentifier, DuplicateName,
        ]
    }
    | {"INTERNAL_ERROR", "USAGE_ERROR", "INVALID_ARGUMENT", "DEPENDENCY_ERROR"}
)
