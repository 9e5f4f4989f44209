"""Spherical space-form groups and exact eta invariants of their links.

The orbifold signature of a closed oriented 4-orbifold corrects the
topological signature by the eta invariant of each singular link
S^3/Gamma (Atiyah-Patodi-Singer).  For the cyclic SU(2) action

    (z1, z2) -> (e^{2 pi i/n} z1, e^{-2 pi i/n} z2)

the eta invariant has the closed form

    eta(S^3/Z_n) = -(1/n) * sum_{k=1}^{n-1} cot^2(k pi / n)
                 = -(n-1)(n-2) / (3n),

which is also the A-type ADE value.  The order-2 suspension action
(-1 on R^4, two antipodal fixed points on S^4) has eta = 0, consistent
with tau_orb of the round quotients vanishing.  D/E links are not in the
catalog: their eta values are not derivable from the data used here and
requesting them fails loudly.

Eta invariants flip sign under orientation reversal; the sign is stored
on the group descriptor and applied by the orbifold layer, never here.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction

from .common import NotInCatalogError

Rational = Fraction


class GroupKind(enum.Enum):
    TRIVIAL = "trivial"
    # order-n cyclic suspension pair; the n=2 case is the -1 action on R^4
    ANTIPODAL = "antipodal"
    CYCLIC_SU2 = "cyclic-su2"
    ADE_A = "A"
    ADE_D = "D"
    ADE_E6 = "E6"
    ADE_E7 = "E7"
    ADE_E8 = "E8"
    # cyclic link of a weighted C*-quotient; eta supplied as external data
    WEIGHTED_CYCLIC = "weighted-cyclic"


_FIXED_ORDERS = {GroupKind.TRIVIAL: 1, GroupKind.ADE_E6: 24, GroupKind.ADE_E7: 48, GroupKind.ADE_E8: 120}


@dataclass(frozen=True)
class GroupDescriptor:
    """A finite subgroup of SO(4) acting freely on S^3, up to the data we need.

    ``orientation`` tags whether the ambient orbifold sees the link with the
    standard (+1) or reversed (-1) orientation.  ``eta_override`` carries an
    externally supplied eta value for WEIGHTED_CYCLIC links, whose individual
    eta invariants are outside the closed-form catalog (only their documented
    sums enter any formula in scope).
    """

    kind: GroupKind
    n: int = 0
    orientation: int = 1
    eta_override: Rational | None = None

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if self.kind in (GroupKind.CYCLIC_SU2, GroupKind.ADE_A, GroupKind.WEIGHTED_CYCLIC):
            if self.n < 1:
                raise ValueError(f"{self.kind.value} needs a positive order, got {self.n}")
        if self.kind is GroupKind.ANTIPODAL and self.n < 2:
            raise ValueError("antipodal suspension action needs order >= 2")
        if self.kind is GroupKind.ADE_D and self.n < 2:
            raise ValueError("D(n) needs n >= 2")

    @property
    def order(self) -> int:
        if self.kind in _FIXED_ORDERS:
            return _FIXED_ORDERS[self.kind]
        if self.kind is GroupKind.ADE_D:
            return 4 * self.n
        return self.n

    def reversed(self) -> "GroupDescriptor":
        return replace(self, orientation=-self.orientation)

    def render(self) -> str:
        prefix = "-" if self.orientation == -1 else ""
        if self.kind is GroupKind.TRIVIAL:
            return prefix + "trivial"
        if self.kind is GroupKind.ANTIPODAL:
            return prefix + "Z2-antipodal" if self.n == 2 else f"{prefix}Zn-antipodal({self.n})"
        if self.kind is GroupKind.CYCLIC_SU2:
            return f"{prefix}Zn-su2({self.n})"
        if self.kind is GroupKind.ADE_A:
            return f"{prefix}A({self.n})"
        if self.kind is GroupKind.ADE_D:
            return f"{prefix}D({self.n})"
        if self.kind is GroupKind.WEIGHTED_CYCLIC:
            raise ValueError("weighted cyclic links have no descriptor-file name")
        return prefix + self.kind.value

    def __str__(self) -> str:
        return self.render()


def trivial() -> GroupDescriptor:
    return GroupDescriptor(GroupKind.TRIVIAL, 1)


def antipodal_z2() -> GroupDescriptor:
    return GroupDescriptor(GroupKind.ANTIPODAL, 2)


def cyclic_su2(n: int) -> GroupDescriptor:
    return GroupDescriptor(GroupKind.CYCLIC_SU2, n)


def weighted_cyclic(n: int, eta: Rational) -> GroupDescriptor:
    return GroupDescriptor(GroupKind.WEIGHTED_CYCLIC, n, eta_override=eta)


_NAME_RE = re.compile(r"^(?P<rev>-)?(?P<base>[A-Za-z0-9]+(?:-[A-Za-z0-9]+)?)(?:\((?P<arg>\d+)\))?$")


def parse_group(text: str) -> GroupDescriptor:
    """Parse a descriptor-file group name, e.g. "Z2-antipodal", "-A(5)"."""
    m = _NAME_RE.match(text.strip())
    if m is None:
        raise ValueError(f"unrecognized group name: {text!r}")
    orientation = -1 if m.group("rev") else 1
    base, arg = m.group("base"), m.group("arg")
    n = int(arg) if arg else 0

    def make(kind, nn):
        return GroupDescriptor(kind, nn, orientation=orientation)

    if base == "trivial" and arg is None:
        return make(GroupKind.TRIVIAL, 1)
    if base == "Z2-antipodal" and arg is None:
        return make(GroupKind.ANTIPODAL, 2)
    if base == "Zn-su2" and arg:
        return make(GroupKind.CYCLIC_SU2, n)
    if base == "A" and arg:
        return make(GroupKind.ADE_A, n)
    if base == "D" and arg:
        return make(GroupKind.ADE_D, n)
    if base in ("E6", "E7", "E8") and arg is None:
        return make(GroupKind["ADE_" + base], 0)
    raise ValueError(f"unrecognized group name: {text!r}")


@dataclass(frozen=True)
class EtaValue:
    """Eta invariant for the standard link orientation plus the sign to apply."""

    value: Rational
    orientation_sign: int = 1

    @property
    def signed(self) -> Rational:
        return self.value * self.orientation_sign


def eta_cyclic(n: int) -> Rational:
    """eta(S^3/Z_n) for the SU(2) action, closed form -(n-1)(n-2)/(3n)."""
    if n < 1:
        raise ValueError("order must be positive")
    return Fraction(-(n - 1) * (n - 2), 3 * n)


def eta_cotangent_oracle(n: int) -> float:
    """Brute-force -(1/n) * sum_{k=1}^{n-1} cot^2(k pi / n) in double precision."""
    if n < 2:
        raise ValueError("the cotangent sum needs n >= 2")
    total = 0.0
    for k in range(1, n):
        total += 1.0 / math.tan(k * math.pi / n) ** 2
    return -total / n


def eta_for_group(group: GroupDescriptor) -> EtaValue:
    """Exact eta invariant of S^3/Gamma with the standard orientation.

    The orientation sign stored on the descriptor is returned alongside,
    not applied; the orbifold layer applies it when summing tau_orb.
    """
    kind = group.kind
    if kind is GroupKind.TRIVIAL:
        value = Fraction(0)
    elif kind is GroupKind.ANTIPODAL:
        # suspension pairs contribute cancelling etas; modelled as 0 per point
        value = Fraction(0)
    elif kind in (GroupKind.CYCLIC_SU2, GroupKind.ADE_A):
        value = eta_cyclic(group.n)
    elif kind is GroupKind.WEIGHTED_CYCLIC:
        if group.eta_override is None:
            raise NotInCatalogError(
                f"weighted cyclic link of order {group.n} carries no eta value"
            )
        value = group.eta_override
    else:
        raise NotInCatalogError(
            f"eta invariant of {kind.value} links is not in the catalog"
        )
    return EtaValue(value, group.orientation)
