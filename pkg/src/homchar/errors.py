"""Shared exception types with a stable mapping to CLI exit codes."""

from __future__ import annotations


class HomcharError(Exception):
    """Base class for all package-specific failures."""


class UniverseMismatchError(HomcharError):
    """Two polynomials from different symbol universes were combined."""


class EquationSyntaxError(HomcharError):
    """Malformed equation or expression text."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnsupportedFormError(HomcharError):
    """Well-formed input outside the supported equation shape."""


class InvalidProfileError(HomcharError):
    """Exponent rows violate the required pattern (distinct p, distinct q, common product)."""


class UnsupportedPatternError(HomcharError):
    """Substitution pattern outside the supported token set or of the wrong size."""


class CapExceededError(HomcharError):
    """A hard resource cap (enumeration size, symbolic order) was exceeded."""


class ResourceCapError(HomcharError):
    """Exact-arithmetic intermediate grew past the configured degree bound."""


class CannotEliminateError(HomcharError):
    """The requested elimination target is absent from the source identity."""


class DomainEvalError(HomcharError):
    """Evaluation at a point outside the expression's domain."""


class BindingError(HomcharError):
    """Symbol-to-field binding is missing or inconsistent with the field."""


class IncompleteAssignmentError(HomcharError):
    """A coefficient assignment does not cover every required index."""
