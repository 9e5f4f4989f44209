"""Exact Weyl-energy bounds for 4-orbifolds and a numerical curvature bench."""

from .exact import PiInterval, PiQuantity, Rational, compare, parse_pi_quantity, pi2
from .common import INFINITE, Sign, Tri

__all__ = [
    "PiInterval",
    "PiQuantity",
    "Rational",
    "compare",
    "parse_pi_quantity",
    "pi2",
    "INFINITE",
    "Sign",
    "Tri",
]

__version__ = "0.1.0"
