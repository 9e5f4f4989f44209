"""Exact values and intervals for the minimal Weyl energies nu and nu_plus.

nu(M) is the infimum of int |W|^2 over all metrics (Kobayashi's invariant)
and nu_plus restricts to conformal classes of positive Yamabe constant.
Both dominate 12 pi^2 tau_orb(M), with equality exactly realized by
self-dual metrics (resp. self-dual of positive Yamabe), and both are
subadditive under connected sums.  The sandwich

    12 pi^2 sum tau_orb  <=  nu(M1 # ... # Mk # X)  <=  sum nu(Mi) + nu(X)

collapses to an exact value when every block admits a self-dual metric or
is a "zero filler" with nu = tau_orb = 0 (round quotients S^4/G', flat
quotients S^1 x S^3 / G, and S^2 x T^2, which collapses with bounded
curvature and positive scalar curvature).

Catalog blocks:

* CP2 with the Fubini-Study metric: nu = nu_plus = 12 pi^2.
* A-type ALE compactifications: the hyperkaehler metric on the minimal
  resolution of C^2/Z_n is anti-self-dual and scalar-flat, so with the
  reversed orientation nu = 8 pi^2 (n - 1/n), attained with positive
  Yamabe constant (the compactification saturates the generalized Aubin
  inequality).
* Total spaces of O(-n) with the scalar-flat Kaehler metric compactify to
  the weighted projective plane CP2_{(1,1,n)}: nu = nu_plus
  = 12 pi^2 (1 + (n-1)(n-2)/(3n)).
* General weighted projective planes CP2_{(d1,d2,d3)}: self-dual Kaehler
  metrics give nu = 4 pi^2 (d1^2+d2^2+d3^2)/(d1 d2 d3); positivity of the
  Yamabe constant is not guaranteed for all weights, so nu_plus keeps an
  infinite upper bound.
* (S^2 x S^2)/Z2 admits a Kaehler-Einstein orbifold metric of positive
  scalar curvature, which realizes nu_plus = 32 pi^2 / 3, while nu is only
  known inside [0, 32 pi^2/3].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .common import (
    INFINITE,
    ExpressionParseError,
    InfiniteUpperError,
    InvalidWeightsError,
    Tri,
)
from .bounds import BoundResult
from .exact import PiInterval, PiQuantity, pi2
from .orbifolds import OrbifoldDescriptor, Pi1Descriptor, CoverSheet, tau_orb
from .space_forms import antipodal_z2, cyclic_su2, weighted_cyclic

Rational = Fraction


@dataclass(frozen=True)
class BuildingBlock:
    """A catalog 4-orbifold with whatever is known about nu and nu_plus."""

    descriptor: OrbifoldDescriptor
    nu: PiInterval
    nu_plus: PiInterval
    admits_selfdual: Tri
    admits_selfdual_psc: Tri
    is_zero_filler: bool

    def __post_init__(self):
        floor = PiQuantity(12 * tau_orb(self.descriptor))
        if self.nu.lower.coefficient < floor.coefficient:
            raise ValueError(f"{self.descriptor.name}: nu lower bound below 12 pi^2 tau_orb")
        if self.nu_plus.lower.coefficient < self.nu.lower.coefficient:
            raise ValueError(f"{self.descriptor.name}: nu_plus lower bound below nu's")
        if self.is_zero_filler:
            if tau_orb(self.descriptor) != 0 or not self.nu.is_exact or bool(self.nu.lower):
                raise ValueError(f"{self.descriptor.name}: zero filler needs nu = tau_orb = 0")

    @property
    def name(self) -> str:
        return self.descriptor.name


@dataclass(frozen=True)
class NuValue:
    """An exact value or interval together with its derivation trace."""

    interval: PiInterval
    exact: bool
    derivation: tuple[str, ...]

    def __post_init__(self):
        if self.exact and not self.interval.is_exact:
            raise ValueError("exact NuValue must have lower = upper")

    def render(self) -> str:
        head = "exact " if self.exact else ""
        return head + self.interval.render()


def _exact(value: PiQuantity) -> PiInterval:
    return PiInterval.exactly(value)


def cp2_block() -> BuildingBlock:
    desc = OrbifoldDescriptor(
        name="CP2",
        euler=3,
        signature=1,
        b1=0,
        b2_plus=1,
        b2_minus=0,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.trivial(),
    )
    v = pi2(12)
    return BuildingBlock(desc, _exact(v), _exact(v), Tri.YES, Tri.YES, False)


def s4_block() -> BuildingBlock:
    desc = OrbifoldDescriptor(
        name="S4",
        euler=2,
        signature=0,
        b1=0,
        b2_plus=0,
        b2_minus=0,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.trivial(),
    )
    return BuildingBlock(desc, _exact(pi2(0)), _exact(pi2(0)), Tri.YES, Tri.YES, True)


def s4_mod_z2_block() -> BuildingBlock:
    """Quotient of S^4 by (x1..x4, x5) -> (-x1..-x4, x5): two antipodal cones."""
    desc = OrbifoldDescriptor(
        name="S4/Z2",
        euler=2,
        signature=0,
        points=(antipodal_z2(), antipodal_z2()),
        b1=0,
        b2_plus=0,
        b2_minus=0,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.finite(2),
        cover_data=(CoverSheet(2, ()),),
    )
    # conformally flat of positive scalar curvature: self-dual, W+ = 0
    return BuildingBlock(desc, _exact(pi2(0)), _exact(pi2(0)), Tri.YES, Tri.YES, True)


def s2xs2_mod_z2_block() -> BuildingBlock:
    """Quotient of S^2 x S^2 by the simultaneous half-turn: four antipodal cones."""
    desc = OrbifoldDescriptor(
        name="(S2xS2)/Z2",
        euler=4,
        signature=0,
        points=(antipodal_z2(),) * 4,
        b1=0,
        b2_plus=1,
        b2_minus=1,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.finite(2),
        cover_data=(CoverSheet(2, ()),),
    )
    top = pi2(32, 3)
    # the Kaehler-Einstein orbifold metric of positive scalar curvature
    # realizes nu_plus; nu itself is undetermined below it
    return BuildingBlock(
        desc,
        PiInterval(pi2(0), top),
        _exact(top),
        Tri.UNKNOWN,
        Tri.NO,  # obstructed: b2+ > 0 while chi_orb = 2 > 0 = 3 tau_orb
        False,
    )


def s2xt2_block() -> BuildingBlock:
    desc = OrbifoldDescriptor(
        name="S2xT2",
        euler=0,
        signature=0,
        b1=2,
        b2_plus=1,
        b2_minus=1,
        h1_order=INFINITE,
        pi1=Pi1Descriptor.positive_b1(),
        pi1_orb=Pi1Descriptor.positive_b1(),
    )
    return BuildingBlock(desc, _exact(pi2(0)), _exact(pi2(0)), Tri.UNKNOWN, Tri.UNKNOWN, True)


def s1xs3_block() -> BuildingBlock:
    desc = OrbifoldDescriptor(
        name="S1xS3",
        euler=0,
        signature=0,
        b1=1,
        b2_plus=0,
        b2_minus=0,
        h1_order=INFINITE,
        pi1=Pi1Descriptor.positive_b1(),
        pi1_orb=Pi1Descriptor.positive_b1(),
    )
    return BuildingBlock(desc, _exact(pi2(0)), _exact(pi2(0)), Tri.YES, Tri.YES, True)


def ale_block(n: int) -> BuildingBlock:
    """Compactified A-type ALE instanton, self-dual orientation.

    chi of the minimal resolution of C^2/Z_n is n, the intersection form
    becomes positive definite of rank n - 1 after the orientation flip, and
    the cone point at infinity is the standard cyclic SU(2) link, so
    tau_orb = (n - 1) - (n-1)(n-2)/(3n) = (2/3)(n - 1/n).
    """
    if n < 1:
        raise InvalidWeightsError("ALE(A, n) needs n >= 1")
    if n == 1:
        return s4_block()
    desc = OrbifoldDescriptor(
        name=f"ALE(A,{n})",
        euler=n + 1,
        signature=n - 1,
        points=(cyclic_su2(n),),
        b1=0,
        b2_plus=n - 1,
        b2_minus=0,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.trivial(),
    )
    v = PiQuantity(Fraction(8 * (n * n - 1), n))
    return BuildingBlock(desc, _exact(v), _exact(v), Tri.YES, Tri.YES, False)


def ale_order_formula(order: int) -> PiQuantity:
    """8 pi^2 (|Gamma| - 1/|Gamma|) under the assumption chi(X_Gamma) = |Gamma|.

    For the A-series this agrees with ``ale_block``; for D/E resolutions
    chi differs from the group order and the link etas are not in the
    catalog, so only this explicitly-flagged formula is offered.
    """
    if order < 1:
        raise ValueError("group order must be positive")
    return PiQuantity(Fraction(8 * (order * order - 1), order))


def ln_block(n: int) -> BuildingBlock:
    """Compactified O(-n), i.e. CP2_{(1,1,n)}, with the self-dual orientation.

    The single cone point is the cyclic SU(2) link seen with reversed
    orientation, so tau_orb = 1 + (n-1)(n-2)/(3n).
    """
    if n < 1:
        raise InvalidWeightsError("Ln(n) needs n >= 1")
    if n == 1:
        return cp2_block()
    desc = OrbifoldDescriptor(
        name=f"CP2(1,1,{n})",
        euler=3,
        signature=1,
        points=(cyclic_su2(n).reversed(),),
        b1=0,
        b2_plus=1,
        b2_minus=0,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.trivial(),
    )
    v = PiQuantity(12 * (1 + Fraction((n - 1) * (n - 2), 3 * n)))
    # scalar-flat Kaehler upstairs gives positive Yamabe constant downstairs
    return BuildingBlock(desc, _exact(v), _exact(v), Tri.YES, Tri.YES, False)


def wp_block(d1: int, d2: int, d3: int) -> BuildingBlock:
    """Weighted projective plane CP2_{(d1,d2,d3)} for pairwise coprime weights.

    chi = 3, tau = 1 and the three cyclic links contribute the documented
    total eta sum -1 + (d1^2+d2^2+d3^2)/(3 d1 d2 d3).  Individual link etas
    for general weights are data external to the catalog; the total is split
    evenly over the singular points because every formula in scope consumes
    only the sum.  Bryant's self-dual Kaehler metrics give the exact nu; a
    positive Yamabe representative is not guaranteed for all weights.
    """
    weights = (d1, d2, d3)
    if any(d < 1 for d in weights):
        raise InvalidWeightsError(f"weights must be positive: {weights}")
    for i in range(3):
        for j in range(i + 1, 3):
            if math.gcd(weights[i], weights[j]) != 1:
                raise InvalidWeightsError(
                    f"weights must be pairwise coprime: {weights[i]}, {weights[j]}"
                )
    if sorted(weights) == [1, 1, 1]:
        return cp2_block()
    if sorted(weights)[:2] == [1, 1]:
        return ln_block(max(weights))

    d1, d2, d3 = weights
    eta_total = -1 + Fraction(d1 * d1 + d2 * d2 + d3 * d3, 3 * d1 * d2 * d3)
    singular = [d for d in weights if d >= 2]
    share = eta_total / len(singular)
    desc = OrbifoldDescriptor(
        name=f"CP2({d1},{d2},{d3})",
        euler=3,
        signature=1,
        points=tuple(weighted_cyclic(d, share) for d in singular),
        b1=0,
        b2_plus=1,
        b2_minus=0,
        h1_order=1,
        pi1=Pi1Descriptor.trivial(),
        pi1_orb=Pi1Descriptor.trivial(),
    )
    v = PiQuantity(Fraction(4 * (d1 * d1 + d2 * d2 + d3 * d3), d1 * d2 * d3))
    return BuildingBlock(desc, _exact(v), PiInterval(v, None), Tri.YES, Tri.UNKNOWN, False)


def catalog_block(name: str, *params: int) -> BuildingBlock:
    """Look up a catalog block by its expression-language name."""
    key = name.strip()
    simple = {
        "CP2": cp2_block,
        "S4": s4_block,
        "S4/Z2": s4_mod_z2_block,
        "(S2xS2)/Z2": s2xs2_mod_z2_block,
        "S2xT2": s2xt2_block,
        "S1xS3": s1xs3_block,
    }
    if key in simple:
        if params:
            raise ValueError(f"{key} takes no parameters")
        return simple[key]()
    if key == "WP":
        if len(params) != 3:
            raise ValueError("WP needs three weights")
        return wp_block(*params)
    if key == "ALE":
        if len(params) != 1:
            raise ValueError("ALE(A, n) needs one parameter")
        return ale_block(params[0])
    if key == "Ln":
        if len(params) != 1:
            raise ValueError("Ln(n) needs one parameter")
        return ln_block(params[0])
    raise ValueError(f"unknown catalog block {name!r}")


def catalog_names() -> list[str]:
    return ["CP2", "S4", "S4/Z2", "(S2xS2)/Z2", "S2xT2", "S1xS3", "WP(d1,d2,d3)", "ALE(A,n)", "Ln(n)"]


# --------------------------------------------------------------------------
# connected-sum expressions: "2*CP2 # WP(1,2,3) # S2xT2 # (S2xS2)/Z2"
# --------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*(?:(?P<mult>\d+)\s*\*\s*)?"
    r"(?P<block>\(S2xS2\)/Z2|S4/Z2|CP2|S4|S2xT2|S1xS3"
    r"|WP\(\s*\d+\s*,\s*\d+\s*,\s*\d+\s*\)"
    r"|ALE\(\s*A\s*,\s*\d+\s*\)"
    r"|Ln\(\s*\d+\s*\))\s*$"
)


def parse_sum_expression(text: str) -> list[BuildingBlock]:
    """Expand a connected-sum expression into its block list, in written order."""
    if not text.strip():
        raise ExpressionParseError("empty expression", 1, 1)
    blocks: list[BuildingBlock] = []
    position = 0
    for piece in text.split("#"):
        m = _TERM_RE.match(piece)
        if m is None:
            col = position + len(piece) - len(piece.lstrip()) + 1
            raise ExpressionParseError(f"cannot parse term {piece.strip()!r}", 1, col)
        mult = int(m.group("mult")) if m.group("mult") else 1
        if mult < 1:
            raise ExpressionParseError("multiplier must be >= 1", 1, position + 1)
        token = m.group("block")
        if "(" in token and not token.startswith("("):
            name = token[: token.index("(")]
            args = token[token.index("(") + 1 : token.rindex(")")]
            params = tuple(int(a) for a in args.split(",") if a.strip().isdigit())
            block = catalog_block(name, *params)
        else:
            block = catalog_block(token)
        blocks.extend([block] * mult)
        position += len(piece) + 1
    return blocks


# --------------------------------------------------------------------------
# connected-sum values
# --------------------------------------------------------------------------


def nu_connected_sum(blocks: list[BuildingBlock]) -> NuValue:
    """Sandwich nu of the connected sum; exact under the self-dual/filler rule."""
    if not blocks:
        raise ValueError("need at least one block")
    tau_sum = sum(tau_orb(b.descriptor) for b in blocks)
    lower = PiQuantity(max(12 * tau_sum, Fraction(0)))
    derivation = [f"12·π^2 · Σ tau_orb = {PiQuantity(12 * tau_sum).render()} (lower bound)"]

    upper: PiQuantity | None = pi2(0)
    for b in blocks:
        if b.nu.upper is None:
            upper = None
            break
        upper = upper + b.nu.upper
    if upper is not None:
        derivation.append(f"subadditivity upper bound = {upper.render()}")

    if len(blocks) == 1:
        # a trivial "sum" inherits everything the catalog knows
        lower = max(lower, blocks[0].nu.lower, key=lambda v: v.coefficient)

    if all(b.admits_selfdual is Tri.YES or b.is_zero_filler for b in blocks):
        derivation.append("every block is self-dual or a zero filler: value is exact")
        value = PiQuantity(12 * tau_sum)
        return NuValue(PiInterval.exactly(value), True, tuple(derivation))

    interval = PiInterval(lower, upper)
    return NuValue(interval, interval.is_exact, tuple(derivation))


def nu_plus_connected_sum(
    blocks: list[BuildingBlock], wplus_bound: BoundResult | None = None
) -> NuValue:
    """Sandwich nu_plus of the connected sum.

    A Weyl-energy lower bound for the sum (from the bound engine, under the
    positive-Yamabe hypothesis that is implicit in nu_plus) converts into
    nu_plus >= -12 pi^2 tau_orb + 2 W+.  Raises InfiniteUpperError when a
    block carries no finite PSC upper bound, since subadditivity then says
    nothing.
    """
    if not blocks:
        raise ValueError("need at least one block")
    tau_sum = sum(tau_orb(b.descriptor) for b in blocks)
    lower = PiQuantity(max(12 * tau_sum, Fraction(0)))
    derivation = [f"12·π^2 · Σ tau_orb = {PiQuantity(12 * tau_sum).render()} (lower bound)"]

    if wplus_bound is not None and wplus_bound.applies and wplus_bound.value is not None:
        converted = PiQuantity(-12 * tau_sum) + 2 * wplus_bound.value
        derivation.append(
            f"-12·π^2·tau_orb + 2·(W+ bound [{wplus_bound.tag}]) = {converted.render()}"
        )
        if converted.coefficient > lower.coefficient:
            lower = converted

    upper = pi2(0)
    for b in blocks:
        if b.nu_plus.upper is None:
            raise InfiniteUpperError(
                f"{b.name} has no finite upper bound for its PSC Weyl energy"
            )
        upper = upper + b.nu_plus.upper
    derivation.append(f"subadditivity upper bound = {upper.render()}")

    if len(blocks) == 1:
        lower = max(lower, blocks[0].nu_plus.lower, key=lambda v: v.coefficient)

    if all(b.admits_selfdual_psc is Tri.YES or b.is_zero_filler for b in blocks):
        derivation.append(
            "every block is self-dual with positive Yamabe constant or a zero filler: exact"
        )
        value = PiQuantity(12 * tau_sum)
        return NuValue(PiInterval.exactly(value), True, tuple(derivation))

    interval = PiInterval(lower, upper)
    return NuValue(interval, interval.is_exact, tuple(derivation))
