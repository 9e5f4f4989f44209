"""Exact arithmetic for rational numbers and rational multiples of pi^2.

Every topological quantity handled here is either a rational number
(Euler characteristics, signatures, eta invariants of spherical space
forms) or a rational multiple of pi^2 (curvature integrals such as
12*pi^2*tau or 32*pi^2/3).  Only the pi^2 grade is ever needed; mixed
pi^0 + pi^2 sums never occur in a closed-form value, so a single rational
coefficient suffices and comparisons are exact.

``Rational`` is the standard-library ``fractions.Fraction``: it is always
reduced with a positive denominator and sits on arbitrary-precision
integers, so cotangent-sum cross-checks and long connected sums cannot
overflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .common import Ordering

Rational = Fraction

PI_SQUARED = math.pi * math.pi

_PI_RE = re.compile(r"^\s*(?P<num>[+-]?\d+)\s*(?:/\s*(?P<den>\d+))?\s*(?:·|\*)\s*(?:π|pi)\^2\s*$")


@dataclass(frozen=True, order=True)
class PiQuantity:
    """An exact value ``coefficient * pi^2``.

    Closed under addition, subtraction and rational scaling; the ordering
    is the exact ordering of the coefficients.
    """

    coefficient: Rational

    @classmethod
    def of(cls, numerator, denominator=1) -> "PiQuantity":
        return cls(Fraction(numerator, denominator))

    def __add__(self, other: "PiQuantity") -> "PiQuantity":
        return PiQuantity(self.coefficient + other.coefficient)

    def __sub__(self, other: "PiQuantity") -> "PiQuantity":
        return PiQuantity(self.coefficient - other.coefficient)

    def __neg__(self) -> "PiQuantity":
        return PiQuantity(-self.coefficient)

    def __mul__(self, scalar) -> "PiQuantity":
        if isinstance(scalar, float):
            raise TypeError("PiQuantity scaling must stay exact; scale by int or Fraction")
        return PiQuantity(self.coefficient * Fraction(scalar))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.coefficient)

    def to_float(self) -> float:
        """Double-precision value; float(Fraction) is correctly rounded."""
        return float(self.coefficient) * PI_SQUARED

    def render(self) -> str:
        c = self.coefficient
        if c.denominator == 1:
            return f"{c.numerator}·π^2"
        return f"{c.numerator}/{c.denominator}·π^2"

    def __str__(self) -> str:
        return self.render()


ZERO = PiQuantity(Fraction(0))


def pi2(numerator, denominator=1) -> PiQuantity:
    """Shorthand constructor: pi2(32, 3) == 32/3·π^2."""
    return PiQuantity(Fraction(numerator, denominator))


def parse_pi_quantity(text: str) -> PiQuantity:
    """Parse the report rendering ``p/q·π^2`` (also accepts ``p/q*pi^2``)."""
    m = _PI_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational multiple of π^2: {text!r}")
    num = int(m.group("num"))
    den = int(m.group("den")) if m.group("den") else 1
    return PiQuantity(Fraction(num, den))


def add(a: PiQuantity, b: PiQuantity) -> PiQuantity:
    return a + b


def compare(a: PiQuantity, b: PiQuantity) -> Ordering:
    if a.coefficient < b.coefficient:
        return Ordering.LESS
    if a.coefficient > b.coefficient:
        return Ordering.GREATER
    return Ordering.EQUAL


@dataclass(frozen=True)
class PiInterval:
    """Interval [lower, upper] of pi^2-multiples; upper=None means +infinity."""

    lower: PiQuantity
    upper: PiQuantity | None

    def __post_init__(self):
        if self.upper is not None and self.upper.coefficient < self.lower.coefficient:
            raise ValueError(f"empty interval: {self.lower} > {self.upper}")

    @classmethod
    def exactly(cls, value: PiQuantity) -> "PiInterval":
        return cls(value, value)

    @property
    def is_exact(self) -> bool:
        return self.upper is not None and self.upper == self.lower

    def render(self) -> str:
        if self.is_exact:
            return self.lower.render()
        hi = "∞" if self.upper is None else self.upper.render()
        return f"[{self.lower.render()}, {hi}]"

    def __str__(self) -> str:
        return self.render()
