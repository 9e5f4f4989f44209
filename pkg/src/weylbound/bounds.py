"""Lower bounds for the self-dual Weyl energy W+ = integral of |W^+|^2.

On a closed oriented 4-orbifold the Gauss-Bonnet and signature integrands
combine into

    2 pi^2 (2 chi_orb + 3 tau_orb) = W+ + (1/48) int s^2 - (1/4) int |ric0|^2,

so a positive Yamabe constant turns topology into lower bounds for W+.
Each theorem-shaped bound is emitted with an applicability flag driven by
user-declared hypotheses; Unknown never fires a bound.  The strongest
covering corrections divide by the largest available group order; absent
cover data the correction falls back to order 1, which weakens but never
invalidates the bound.

Obstructions: a self-dual metric has W+ = 12 pi^2 tau_orb, so the bounds
force chi_orb <= 3 tau_orb (b2+ > 0 or harmonic W+ routes) or
2 chi_orb <= 3 tau_orb (large-index subgroup route) whenever a self-dual
metric of positive Yamabe constant exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .common import HypothesisNotMetError, Sign, Tri
from .orbifolds import (
    OrbifoldDescriptor,
    Pi1Kind,
    chi_orb,
    has_large_index_subgroups,
    tau_orb,
)
from .exact import PiQuantity, pi2

Rational = Fraction


@dataclass(frozen=True)
class Hypotheses:
    """User-declared hypotheses; the engine never upgrades Unknown to Yes.

    ``seshadri_c2`` is c^2 for the modified scalar curvature s + c|W| >= 0;
    it must be rational so the resulting bound stays exact (convert floats
    explicitly and knowingly).  ``itoh_modified_sc`` declares s - 6 w^- >= 0
    where w^- is the lowest pointwise eigenvalue of W^+.
    """

    yamabe_sign: Sign = Sign.UNKNOWN
    b2_plus_positive: Tri = Tri.UNKNOWN
    b2_minus_positive: Tri = Tri.UNKNOWN
    harmonic_wplus_nonzero: Tri = Tri.UNKNOWN
    is_manifold: bool | None = None
    excluded_s4_rp4: bool = False
    seshadri_c2: Rational | None = None
    itoh_modified_sc: Tri = Tri.UNKNOWN

    def __post_init__(self):
        if self.seshadri_c2 is not None and self.seshadri_c2 <= 0:
            raise ValueError("seshadri_c2 must be a positive rational")


@dataclass(frozen=True)
class BoundResult:
    """One lower bound for W+ with its provenance and equality case."""

    tag: str
    value: PiQuantity | None
    applies: bool
    hypotheses_used: tuple[str, ...]
    equality_case: str
    rank: int = 0  # tie-break strength of the equality characterization

    def render(self) -> str:
        val = self.value.render() if self.value is not None else "-"
        flag = "applies" if self.applies else "off"
        return f"{self.tag:18s} {flag:7s} {val}"


@dataclass(frozen=True)
class ObstructionVerdict:
    verdict: str  # "Obstructed" | "NotDecided"
    reasons: tuple[tuple[str, str], ...] = ()


def _tri_from_optional_count(count: int | None, declared: Tri, what: str) -> Tri:
    """Combine an exact descriptor count with a declared flag; counts win."""
    if count is not None:
        exact = Tri.YES if count > 0 else Tri.NO
        if declared is not Tri.UNKNOWN and declared is not exact:
            raise ValueError(f"declared {what}={declared.value} contradicts descriptor count {count}")
        return exact
    return declared


def _effective_manifold(m: OrbifoldDescriptor, h: Hypotheses) -> bool:
    if h.is_manifold is not None:
        if h.is_manifold and m.points:
            raise ValueError("declared manifold but the descriptor has singular points")
        return h.is_manifold
    return m.is_manifold


def enumerate_bounds(m: OrbifoldDescriptor, h: Hypotheses) -> list[BoundResult]:
    """Every bound in the battery, with exact values and applicability flags.

    Values are reported even when negative (next to the clamped trivial
    bound) so the user sees which theorem is informative; a bound whose
    ingredients are structurally missing carries value None.
    """
    chi_o = chi_orb(m)
    tau_o = tau_orb(m)
    combo = 2 * chi_o + 3 * tau_o
    ypos = h.yamabe_sign is Sign.POSITIVE
    manifold = _effective_manifold(m, h)
    b2p = _tri_from_optional_count(m.b2_plus, h.b2_plus_positive, "b2+ > 0")
    b2m = _tri_from_optional_count(m.b2_minus, h.b2_minus_positive, "b2- > 0")
    results: list[BoundResult] = []

    def emit(tag, value, applies, used, equality, rank=0):
        results.append(BoundResult(tag, value, applies, tuple(used), equality, rank))

    # (a) integral of a nonnegative density
    emit("trivial", pi2(0), True, (), "W+ identically zero (anti-self-dual)", 0)

    # (b) W+ - W- = 12 pi^2 tau_orb and W- >= 0
    emit(
        "signature",
        PiQuantity(12 * tau_o),
        True,
        (),
        "self-dual metric (W- = 0)",
        1,
    )

    # (c) finite orbifold fundamental group, corrected by the largest
    # orbifold group of the universal orbifold cover (user-supplied)
    k_orb = m.pi1_orb.finite_order
    if k_orb is not None:
        cover_order = 1
        for sheet in m.cover_data:
            if sheet.degree == k_orb:
                cover_order = max((g.order for g in sheet.groups), default=1)
        value_c = PiQuantity(2 * combo) - pi2(8, k_orb * cover_order)
        emit(
            "orbifold-cover",
            value_c,
            ypos,
            ("Y > 0", f"|pi1_orb| = {k_orb}", f"cover group order {cover_order}"),
            "attained when the universal orbifold cover is Einstein and "
            "saturates the generalized Aubin inequality",
            8,
        )
    else:
        emit("orbifold-cover", None, False, ("needs |pi1_orb| < infinity",), "", 8)

    # (d) finite ordinary fundamental group; the ordinary universal cover
    # keeps the same singular types, so divide by the largest own order
    k_pi1 = m.pi1.finite_order
    if k_pi1 is not None:
        value_d = PiQuantity(2 * combo) - pi2(8, k_pi1 * m.max_point_order)
        equality = (
            "conformal to a round 4-sphere"
            if manifold
            else "not characterized for orbifolds"
        )
        emit(
            "pi1-finite",
            value_d,
            ypos,
            ("Y > 0", f"|pi1| = {k_pi1}", f"max own group order {m.max_point_order}"),
            equality,
            9,
        )
    else:
        emit("pi1-finite", None, False, ("needs |pi1| < infinity",), "", 9)

    # (e) finite first homology
    if isinstance(m.h1_order, int):
        value_e = PiQuantity(2 * combo) - pi2(8, m.h1_order * m.max_point_order)
        equality = (
            "conformal to a round 4-sphere"
            if manifold
            else "not characterized for orbifolds"
        )
        emit(
            "h1-finite",
            value_e,
            ypos,
            ("Y > 0", f"|H1| = {m.h1_order}", f"max own group order {m.max_point_order}"),
            equality,
            7,
        )
    else:
        emit("h1-finite", None, False, ("needs |H1| < infinity",), "", 7)

    # (f) arbitrarily large finite-index subgroups of pi1 or pi1_orb
    large = Tri.YES if Tri.YES in (
        has_large_index_subgroups(m.pi1),
        has_large_index_subgroups(m.pi1_orb),
    ) else Tri.UNKNOWN
    emit(
        "large-index",
        PiQuantity(2 * combo),
        ypos and large is Tri.YES,
        ("Y > 0", "pi1 or pi1_orb has arbitrarily large finite-index subgroups"),
        "quotient of S^3 x R saturates the b1 > 0 case",
        2,
    )

    # (g) b2+ > 0
    emit(
        "b2plus",
        PiQuantity(Fraction(4, 3) * combo),
        ypos and b2p is Tri.YES,
        ("Y > 0", "b2+ > 0"),
        "conformal to an orbifold Kahler-Einstein metric",
        5,
    )

    # (h) harmonic nonzero self-dual Weyl tensor
    emit(
        "harmonic-weyl",
        PiQuantity(Fraction(4, 3) * combo),
        ypos and h.harmonic_wplus_nonzero is Tri.YES,
        ("Y > 0", "delta W+ = 0, W+ != 0"),
        "Einstein, Kahler or the quotient of a Kahler orbifold by a free "
        "anti-holomorphic isometric involution",
        4,
    )

    # (i) manifold bound int |W|^2 >= 4 pi^2 chi rewritten for W+ via
    # W = -12 pi^2 tau + 2 W+
    value_i = PiQuantity(2 * Fraction(m.euler) + 6 * Fraction(m.signature))
    emit(
        "total-weyl",
        value_i,
        ypos and manifold and h.excluded_s4_rp4,
        ("Y > 0", "manifold", "not diffeomorphic to S^4 or RP^4"),
        "conformal to CP^2 with the Fubini-Study metric or to a quotient of "
        "S^1 x S^3 with a product of standard metrics",
        6,
    )

    # (j) apply the b2+ bound to the reversed orientation and convert back:
    # W+ = 12 pi^2 tau + W- >= (8 pi^2/3)(chi + 3 tau)
    emit(
        "b2minus-reversed",
        PiQuantity(Fraction(8, 3) * (Fraction(m.euler) + 3 * Fraction(m.signature))),
        ypos and manifold and b2m is Tri.YES,
        ("Y > 0", "manifold", "b2- > 0"),
        "reverse orientation conformal to a Kahler-Einstein metric",
        1,
    )

    # (k) Yamabe constant zero
    emit(
        "yamabe-zero",
        PiQuantity(2 * combo),
        h.yamabe_sign is Sign.ZERO,
        ("Y = 0",),
        "conformal to a Ricci-flat orbifold metric",
        3,
    )

    # (l) modified scalar curvature s + c|W| >= 0 (manifolds); rational in c^2
    if h.seshadri_c2 is not None:
        value_l = PiQuantity(
            2 * (2 * Fraction(m.euler) / (1 + h.seshadri_c2 / 24) + 3 * Fraction(m.signature))
        )
        emit(
            "seshadri",
            value_l,
            manifold,
            ("manifold", f"s + c|W| >= 0 with c^2 = {h.seshadri_c2}"),
            "sharp; equality not characterized here",
            1,
        )
    else:
        emit("seshadri", None, False, ("needs c with s + c|W| >= 0",), "", 1)

    # (m) modified scalar curvature s - 6 w^- >= 0 (manifolds)
    emit(
        "itoh",
        PiQuantity(Fraction(4, 3) * (2 * Fraction(m.euler) + 3 * Fraction(m.signature))),
        manifold and h.itoh_modified_sc is Tri.YES,
        ("manifold", "s - 6 w^- >= 0"),
        "sharp; equality not characterized here",
        1,
    )

    return results


def best_bound(m: OrbifoldDescriptor, h: Hypotheses) -> BoundResult:
    """The applicable bound of maximal exact value.

    Ties are broken by the strength of the equality characterization, in the
    fixed order: pi1-finite > orbifold-cover > h1-finite > total-weyl >
    b2plus > harmonic-weyl > yamabe-zero > large-index > signature and the
    modified-scalar-curvature bounds > trivial.
    """
    applicable = [b for b in enumerate_bounds(m, h) if b.applies and b.value is not None]
    return max(applicable, key=lambda b: (b.value.coefficient, b.rank))


def selfdual_psc_obstruction(
    m: OrbifoldDescriptor, h: Hypotheses | None = None
) -> ObstructionVerdict:
    """Can M carry a self-dual orbifold metric of positive Yamabe constant?

    Purely topological routes use the descriptor (b2+ count, large-index
    predicate); the harmonic-W+ route additionally needs the declared
    hypothesis and is consulted only when ``h`` is given.
    """
    chi_o = chi_orb(m)
    tau_o = tau_orb(m)
    reasons: list[tuple[str, str]] = []

    b2p = Tri.YES if (m.b2_plus or 0) > 0 else Tri.UNKNOWN
    if h is not None and b2p is Tri.UNKNOWN:
        b2p = h.b2_plus_positive
    if b2p is Tri.YES and chi_o > 3 * tau_o:
        reasons.append(("b2plus", f"chi_orb - 3 tau_orb = {chi_o - 3 * tau_o} > 0"))

    large = Tri.YES if Tri.YES in (
        has_large_index_subgroups(m.pi1),
        has_large_index_subgroups(m.pi1_orb),
    ) else Tri.UNKNOWN
    if large is Tri.YES and 2 * chi_o > 3 * tau_o:
        reasons.append(("large-index", f"2 chi_orb - 3 tau_orb = {2 * chi_o - 3 * tau_o} > 0"))

    if h is not None and h.harmonic_wplus_nonzero is Tri.YES and chi_o > 3 * tau_o:
        reasons.append(("harmonic-weyl", f"chi_orb - 3 tau_orb = {chi_o - 3 * tau_o} > 0"))

    if reasons:
        return ObstructionVerdict("Obstructed", tuple(reasons))
    return ObstructionVerdict("NotDecided")


def stabilization_threshold(m: OrbifoldDescriptor) -> int:
    """Smallest n0 such that M # n(S^2 x S^2) is obstructed for all n >= n0.

    Summing with S^2 x S^2 adds 2 to chi_orb - 3 tau_orb and 4 to
    2 chi_orb - 3 tau_orb per copy, while preserving both gating hypotheses
    (b2+ grows, pi1 is unchanged by a simply connected summand).
    """
    chi_o = chi_orb(m)
    tau_o = tau_orb(m)
    thresholds = []

    if (m.b2_plus or 0) > 0:
        # need chi_orb - 3 tau_orb + 2 n > 0
        deficit = 3 * tau_o - chi_o  # positive when not yet obstructed
        thresholds.append(max(0, _first_integer_above(deficit, 2)))

    if Tri.YES in (has_large_index_subgroups(m.pi1), has_large_index_subgroups(m.pi1_orb)):
        deficit = 3 * tau_o - 2 * chi_o
        thresholds.append(max(0, _first_integer_above(deficit, 4)))

    if not thresholds:
        raise HypothesisNotMetError(
            "stabilization needs b2+ > 0 or an arbitrarily-large-index subgroup"
        )
    return min(thresholds)


def _first_integer_above(deficit: Rational, step: int) -> int:
    """Smallest integer n >= 0 with step * n > deficit."""
    if deficit < 0:
        return 0
    return int(deficit // step) + 1


def wplus_from_yamabe(y_lower: float) -> float:
    """Convert a Yamabe lower bound into a W+ lower bound via Y <= 2 sqrt(6) W+^(1/2).

    Valid under b2+ > 0 or a nonzero harmonic self-dual Weyl tensor.
    """
    if y_lower < 0:
        raise ValueError("the conversion needs a nonnegative Yamabe lower bound")
    return y_lower * y_lower / 24.0
