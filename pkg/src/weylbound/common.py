"""Shared three-valued logic, orderings, and the error taxonomy.

Hypotheses on orbifold groups and conformal classes are rarely decidable
from a partial descriptor, so predicates answer Yes/No/Unknown and a bound
fires only on Yes.  Domain errors are deliberately loud: a group whose eta
invariant is not in the catalog must raise, never guess.
"""

from __future__ import annotations

import enum


class Tri(enum.Enum):
    """Three-valued answer for group/topology predicates."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, text: str) -> "Tri":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"expected yes/no/unknown, got {text!r}") from None


class Sign(enum.Enum):
    """Sign of a Yamabe constant, as declared by the user."""

    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, text: str) -> "Sign":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"expected positive/zero/negative/unknown, got {text!r}"
            ) from None


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class _Infinite:
    """Singleton marker for an infinite group order."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = _Infinite()


class WeylboundError(Exception):
    """Base class for the domain errors mapped to CLI exit code 1."""


class NotInCatalogError(WeylboundError):
    """A group action whose eta invariant the catalog does not know."""


class InvalidWeightsError(WeylboundError):
    """Weighted projective weights that are not pairwise coprime positives."""


class HypothesisNotMetError(WeylboundError):
    """An operation was invoked without its gating hypothesis."""


class MissingInvariantError(WeylboundError):
    """A required descriptor field is absent."""


class InfiniteUpperError(WeylboundError):
    """A building block carries no finite upper bound for its PSC Weyl energy."""


class SingularMetricError(WeylboundError):
    """The metric matrix failed positive-definiteness at a sample point."""


class NonConvergenceError(WeylboundError):
    """Descent was still decreasing faster than tolerance at the step limit."""


class ParseError(Exception):
    """Base class for input-syntax errors mapped to CLI exit code 2."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {column})" if column is not None else ")")
        super().__init__(message + where)


class DescriptorParseError(ParseError):
    """Malformed orbifold descriptor file."""


class ExpressionParseError(ParseError):
    """Malformed connected-sum expression."""
