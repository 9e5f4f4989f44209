"""Symbolic closed oriented 4-orbifolds and their exact invariants.

A descriptor records the underlying Euler characteristic and signature,
the multiset of singular-point groups, optional Betti/homology data and
fundamental-group classifications.  The two orbifold invariants are

    chi_orb(M) = chi(M) - sum_i (1 - 1/|Gamma_i|),
    tau_orb(M) = tau(M) + sum_i eta(S^3/Gamma_i),

and under a k-fold orbifold covering both scale linearly in k.  Connected
sums add points, add signatures, and combine fundamental groups as free
products (Seifert-Van Kampen holds for the orbifold fundamental group).

Locations of singular points are never recorded: every formula in scope
depends only on the multiset of groups.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .common import INFINITE, DescriptorParseError, Tri, _Infinite
from .space_forms import GroupDescriptor, GroupKind, eta_for_group, parse_group

Rational = Fraction


class Pi1Kind(enum.Enum):
    TRIVIAL = "trivial"
    FINITE = "finite"
    FREE_PRODUCT_FINITE = "free-product"
    INFINITE_RESIDUALLY_FINITE = "infinite-residually-finite"
    POSITIVE_B1 = "positive-b1"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Pi1Descriptor:
    """Partial knowledge of a fundamental group, enough to gate the bounds."""

    kind: Pi1Kind
    order: int | None = None
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind is Pi1Kind.FINITE and (self.order is None or self.order < 1):
            raise ValueError("finite pi1 needs an order >= 1")
        if self.kind is Pi1Kind.FREE_PRODUCT_FINITE:
            if len(self.factors) < 2 or any(f < 2 for f in self.factors):
                raise ValueError("a free product needs >= 2 factors of order >= 2")

    @classmethod
    def trivial(cls):
        return cls(Pi1Kind.TRIVIAL)

    @classmethod
    def finite(cls, order: int):
        if order == 1:
            return cls.trivial()
        return cls(Pi1Kind.FINITE, order=order)

    @classmethod
    def free_product(cls, factors) -> "Pi1Descriptor":
        kept = tuple(sorted(f for f in factors if f > 1))
        if not kept:
            return cls.trivial()
        if len(kept) == 1:
            return cls.finite(kept[0])
        return cls(Pi1Kind.FREE_PRODUCT_FINITE, factors=kept)

    @classmethod
    def infinite_residually_finite(cls):
        return cls(Pi1Kind.INFINITE_RESIDUALLY_FINITE)

    @classmethod
    def positive_b1(cls):
        return cls(Pi1Kind.POSITIVE_B1)

    @classmethod
    def unknown(cls):
        return cls(Pi1Kind.UNKNOWN)

    @property
    def finite_order(self) -> int | None:
        """Group order when the group is known finite, else None."""
        if self.kind is Pi1Kind.TRIVIAL:
            return 1
        if self.kind is Pi1Kind.FINITE:
            return self.order
        return None

    def render(self) -> str:
        if self.kind is Pi1Kind.FINITE:
            return f"finite({self.order})"
        if self.kind is Pi1Kind.FREE_PRODUCT_FINITE:
            return "free-product(" + ",".join(str(f) for f in self.factors) + ")"
        return self.kind.value


_PI1_RE = re.compile(r"^(?P<base>[a-z0-9-]+)(?:\((?P<args>[\d,\s]*)\))?$")


def parse_pi1(text: str) -> Pi1Descriptor:
    m = _PI1_RE.match(text.strip().lower())
    if m is None:
        raise ValueError(f"unrecognized pi1 classification: {text!r}")
    base, args = m.group("base"), m.group("args")
    if base == "trivial" and args is None:
        return Pi1Descriptor.trivial()
    if base == "finite" and args:
        return Pi1Descriptor.finite(int(args))
    if base == "free-product" and args:
        return Pi1Descriptor.free_product(int(a) for a in args.split(","))
    if base == "infinite-residually-finite" and args is None:
        return Pi1Descriptor.infinite_residually_finite()
    if base == "positive-b1" and args is None:
        return Pi1Descriptor.positive_b1()
    if base == "unknown" and args is None:
        return Pi1Descriptor.unknown()
    raise ValueError(f"unrecognized pi1 classification: {text!r}")


def combine_free_product(p: Pi1Descriptor, q: Pi1Descriptor) -> Pi1Descriptor:
    """Classification of the free product p * q.

    Trivial is the identity.  Finite families merge into a free product of
    finite groups.  A factor with b1 > 0 keeps b1 > 0 (first Betti numbers
    add under connected sum), and an infinite residually finite factor keeps
    arbitrarily-large-index subgroups in the product, since killing the other
    factor retracts the product onto it.
    """
    if p.kind is Pi1Kind.TRIVIAL:
        return q
    if q.kind is Pi1Kind.TRIVIAL:
        return p
    if Pi1Kind.POSITIVE_B1 in (p.kind, q.kind):
        return Pi1Descriptor.positive_b1()
    if Pi1Kind.INFINITE_RESIDUALLY_FINITE in (p.kind, q.kind):
        return Pi1Descriptor.infinite_residually_finite()
    if Pi1Kind.UNKNOWN in (p.kind, q.kind):
        # the known side is a retract, so its large-index property would
        # survive, but no kind expresses "unknown * finite"; stay conservative
        return Pi1Descriptor.unknown()

    def factors_of(d):
        if d.kind is Pi1Kind.FINITE:
            return (d.order,)
        return d.factors

    return Pi1Descriptor.free_product(factors_of(p) + factors_of(q))


def has_large_index_subgroups(p: Pi1Descriptor) -> Tri:
    """Does the group contain subgroups of arbitrarily large finite index?

    Free products of >= 2 nontrivial finite groups qualify: in Z2 * Z2 the
    subgroup generated by (ab)^d has index 2d, and the general case retracts
    onto such a product.  b1 > 0 gives surjections onto every Z_k; infinite
    residually finite groups exclude each element by finite-index subgroups.
    """
    if p.kind in (Pi1Kind.TRIVIAL, Pi1Kind.FINITE):
        return Tri.NO
    if p.kind in (
        Pi1Kind.POSITIVE_B1,
        Pi1Kind.INFINITE_RESIDUALLY_FINITE,
        Pi1Kind.FREE_PRODUCT_FINITE,
    ):
        return Tri.YES
    return Tri.UNKNOWN


@dataclass(frozen=True)
class CoverSheet:
    """User-supplied data of one orbifold covering: degree and singular groups."""

    degree: int
    groups: tuple[GroupDescriptor, ...] = ()

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("cover degree must be positive")


@dataclass(frozen=True)
class OrbifoldDescriptor:
    """A closed oriented 4-orbifold with isolated singular points."""

    name: str
    euler: int
    signature: int
    points: tuple[GroupDescriptor, ...] = ()
    b1: int | None = None
    b2_plus: int | None = None
    b2_minus: int | None = None
    h1_order: int | _Infinite | None = None
    pi1: Pi1Descriptor = field(default_factory=Pi1Descriptor.unknown)
    pi1_orb: Pi1Descriptor = field(default_factory=Pi1Descriptor.unknown)
    cover_data: tuple[CoverSheet, ...] = ()

    def __post_init__(self):
        for g in self.points:
            if g.order < 2:
                raise ValueError("orbifold points must carry a nontrivial group")
        for b in (self.b1, self.b2_plus, self.b2_minus):
            if b is not None and b < 0:
                raise ValueError("Betti numbers are nonnegative")
        if isinstance(self.h1_order, int) and self.h1_order < 1:
            raise ValueError("h1_order must be positive or Infinite")
        if self.pi1.kind is Pi1Kind.TRIVIAL and self.b1 not in (None, 0):
            raise ValueError("trivial pi1 forces b1 = 0")
        if self.b1 is not None and self.b2_plus is not None and self.b2_minus is not None:
            # oriented Poincare duality, b3 = b1: chi = 2 - 2 b1 + b2+ + b2-
            expected = 2 - 2 * self.b1 + self.b2_plus + self.b2_minus
            if self.euler != expected:
                raise ValueError(
                    f"{self.name}: euler {self.euler} inconsistent with Betti data "
                    f"(2 - 2*b1 + b2+ + b2- = {expected})"
                )

    @property
    def is_manifold(self) -> bool:
        return not self.points

    @property
    def max_point_order(self) -> int:
        return max((g.order for g in self.points), default=1)


def chi_orb(m: OrbifoldDescriptor) -> Rational:
    """chi(M) minus sum of (1 - 1/|Gamma_i|) over the singular points."""
    total = Fraction(m.euler)
    for g in m.points:
        total -= 1 - Fraction(1, g.order)
    return total


def tau_orb(m: OrbifoldDescriptor) -> Rational:
    """tau(M) plus the signed eta invariants of the singular links."""
    total = Fraction(m.signature)
    for g in m.points:
        total += eta_for_group(g).signed
    return total


def connected_sum(m1: OrbifoldDescriptor, m2: OrbifoldDescriptor) -> OrbifoldDescriptor:
    """Connected sum along smooth points: chi adds minus 2, tau adds."""

    def add_optional(a, b):
        return None if a is None or b is None else a + b

    if m1.h1_order is None or m2.h1_order is None:
        h1 = None
    elif INFINITE in (m1.h1_order, m2.h1_order):
        h1 = INFINITE
    else:
        h1 = m1.h1_order * m2.h1_order

    return OrbifoldDescriptor(
        name=f"{m1.name} # {m2.name}",
        euler=m1.euler + m2.euler - 2,
        signature=m1.signature + m2.signature,
        points=m1.points + m2.points,
        b1=add_optional(m1.b1, m2.b1),
        b2_plus=add_optional(m1.b2_plus, m2.b2_plus),
        b2_minus=add_optional(m1.b2_minus, m2.b2_minus),
        h1_order=h1,
        pi1=combine_free_product(m1.pi1, m2.pi1),
        pi1_orb=combine_free_product(m1.pi1_orb, m2.pi1_orb),
    )


def connected_sum_list(blocks) -> OrbifoldDescriptor:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("connected sum of an empty list")
    out = blocks[0]
    for b in blocks[1:]:
        out = connected_sum(out, b)
    return out


def reverse_orientation(m: OrbifoldDescriptor) -> OrbifoldDescriptor:
    """Negate the signature, swap b2+/b2-, flip every link orientation.

    The name gains or loses a leading "~" so the operation is an involution.
    """
    name = m.name[1:] if m.name.startswith("~") else "~" + m.name
    return replace(
        m,
        name=name,
        signature=-m.signature,
        b2_plus=m.b2_minus,
        b2_minus=m.b2_plus,
        points=tuple(g.reversed() for g in m.points),
        cover_data=tuple(
            CoverSheet(c.degree, tuple(g.reversed() for g in c.groups)) for c in m.cover_data
        ),
    )


def scale_by_cover(m: OrbifoldDescriptor, k: int) -> tuple[Rational, Rational]:
    """(k * chi_orb, k * tau_orb): the invariants any k-fold cover must carry."""
    if k < 1:
        raise ValueError("cover degree must be positive")
    return k * chi_orb(m), k * tau_orb(m)


@dataclass(frozen=True)
class CoverCheck:
    degree: int
    chi_cover: Rational
    tau_cover: Rational
    chi_underlying: Rational
    tau_underlying: Rational
    consistent: bool


def cover_consistency(m: OrbifoldDescriptor) -> list[CoverCheck]:
    """Check each supplied cover against the linear scaling of the invariants.

    Given the degree and the cover's singular groups, the cover's underlying
    chi and tau are forced; they must come out integral.
    """
    out = []
    for sheet in m.cover_data:
        chi_c, tau_c = scale_by_cover(m, sheet.degree)
        chi_u = chi_c + sum(1 - Fraction(1, g.order) for g in sheet.groups)
        tau_u = tau_c - sum(eta_for_group(g).signed for g in sheet.groups)
        ok = chi_u.denominator == 1 and tau_u.denominator == 1
        out.append(CoverCheck(sheet.degree, chi_c, tau_c, chi_u, tau_u, ok))
    return out


# --------------------------------------------------------------------------
# descriptor files: line-oriented "key = value"
# --------------------------------------------------------------------------

_KEYS = ("name", "euler", "signature", "points", "b1", "b2+", "b2-", "h1_order", "pi1", "pi1_orb")


def parse_descriptor(text: str) -> OrbifoldDescriptor:
    """Parse the key = value descriptor format; unknown keys are rejected.

    Grammar (one key per line; lines starting with "#" are comments, since
    "#" inside a value spells a connected sum):

        name = X
        euler = 4
        signature = 0
        points = Z2-antipodal, Z2-antipodal
        b1 = 0
        b2+ = 1
        b2- = 1
        h1_order = 1          # positive integer or "infinite"
        pi1 = trivial         # trivial | finite(k) | free-product(k1,k2,...)
        pi1_orb = free-product(2,2)   # | infinite-residually-finite | positive-b1 | unknown
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "=" not in line:
            raise DescriptorParseError("expected 'key = value'", lineno, 1)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        col = raw.index("=") + 2
        if key not in _KEYS:
            raise DescriptorParseError(f"unknown key {key!r}", lineno, 1)
        if key in values:
            raise DescriptorParseError(f"duplicate key {key!r}", lineno, 1)
        if not value:
            raise DescriptorParseError(f"missing value for {key!r}", lineno, col)
        values[key] = value

    def require(key):
        if key not in values:
            raise DescriptorParseError(f"missing required key {key!r}", None, None)
        return values[key]

    def parse_int(key, text_value):
        try:
            return int(text_value)
        except ValueError:
            raise DescriptorParseError(f"{key}: not an integer: {text_value!r}", None, None) from None

    name = require("name")
    euler = parse_int("euler", require("euler"))
    signature = parse_int("signature", require("signature"))

    points: tuple[GroupDescriptor, ...] = ()
    if "points" in values and values["points"].lower() != "none":
        try:
            points = tuple(parse_group(tok) for tok in values["points"].split(",") if tok.strip())
        except ValueError as exc:
            raise DescriptorParseError(f"points: {exc}", None, None) from None

    def optional_int(key):
        return parse_int(key, values[key]) if key in values else None

    h1: int | _Infinite | None = None
    if "h1_order" in values:
        h1 = INFINITE if values["h1_order"].lower() == "infinite" else parse_int("h1_order", values["h1_order"])

    def optional_pi1(key):
        if key not in values:
            return Pi1Descriptor.unknown()
        try:
            return parse_pi1(values[key])
        except ValueError as exc:
            raise DescriptorParseError(f"{key}: {exc}", None, None) from None

    try:
        return OrbifoldDescriptor(
            name=name,
            euler=euler,
            signature=signature,
            points=points,
            b1=optional_int("b1"),
            b2_plus=optional_int("b2+"),
            b2_minus=optional_int("b2-"),
            h1_order=h1,
            pi1=optional_pi1("pi1"),
            pi1_orb=optional_pi1("pi1_orb"),
        )
    except ValueError as exc:
        raise DescriptorParseError(str(exc), None, None) from None


def render_descriptor(m: OrbifoldDescriptor) -> str:
    lines = [f"name = {m.name}", f"euler = {m.euler}", f"signature = {m.signature}"]
    if m.points:
        lines.append("points = " + ", ".join(g.render() for g in m.points))
    if m.b1 is not None:
        lines.append(f"b1 = {m.b1}")
    if m.b2_plus is not None:
        lines.append(f"b2+ = {m.b2_plus}")
    if m.b2_minus is not None:
        lines.append(f"b2- = {m.b2_minus}")
    if m.h1_order is not None:
        lines.append(f"h1_order = {'infinite' if m.h1_order is INFINITE else m.h1_order}")
    if m.pi1.kind is not Pi1Kind.UNKNOWN:
        lines.append(f"pi1 = {m.pi1.render()}")
    if m.pi1_orb.kind is not Pi1Kind.UNKNOWN:
        lines.append(f"pi1_orb = {m.pi1_orb.render()}")
    return "\n".join(lines) + "\n"
