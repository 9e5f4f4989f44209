"""Catalog of explicit 4-metrics as weighted coordinate charts.

Each chart is a box in R^4 with a metric (and optionally its analytic first
derivatives), an orientation relative to the global one, and a smooth
partition weight.  A metric is represented by a list of charts whose
weights sum to 1 at every point of the space, up to a truncation tail that
is many orders below the quadrature error:

* round S^4: two stereographic charts glued by the inversion x -> x/|x|^2,
  with the conformal factor psi(x) = 2/(1+|x|^2) and partition weight
  sigma(x) = 1/(1+|x|^8); sigma(x) + sigma(x/|x|^2) = 1 exactly.
  The inversion is orientation-reversing, so the second chart carries
  orientation -1.
* S^2(a) x S^2(b): products of per-factor stereographic pairs (four charts)
  with per-factor weights of the same shape.
* CP^2 with the Fubini-Study metric normalized to s = 24 (Vol = pi^2/2):
  the three affine charts of the homogeneous coordinates with the smooth
  partition |Z_i|^8 / sum_j |Z_j|^8, which in each chart's own coordinates
  reads 1/(1 + |z_1|^8 + |z_2|^8).  Affine transitions are holomorphic, so
  all three charts share the complex orientation.
* flat box: the identity metric on [0,1]^4 (not closed; used for the
  vanishing-curvature checks).

All metric callables are vectorized over an (N, 4) array of points.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

PointFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MetricChart:
    """One coordinate box of a metric, with partition weight and orientation."""

    name: str
    bounds: tuple[tuple[float, float], ...]
    metric: PointFn  # (N,4) -> (N,4,4), symmetric positive definite
    dmetric: PointFn | None = None  # (N,4) -> (N,4,4,4), [n,k,i,j] = d_k g_ij
    weight: PointFn | None = None  # (N,4) -> (N,), smooth partition weight
    orientation: int = 1
    multiplicity: float = 1.0
    fd_step: float = 1e-5

    def __post_init__(self):
        if len(self.bounds) != 4:
            raise ValueError("charts are 4-dimensional")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def weights_at(self, pts: np.ndarray) -> np.ndarray:
        if self.weight is None:
            return np.full(pts.shape[0], self.multiplicity)
        return self.multiplicity * self.weight(pts)


@dataclass(frozen=True)
class CatalogMetric:
    """A named closed (or flat test) metric: charts plus reference data."""

    name: str
    charts: tuple[MetricChart, ...]
    chi: int | None
    tau: int | None
    closed: bool
    kahler: bool
    expected_scalar: float | None = None
    expected_volume: float | None = None


def _box(halfwidth: float) -> tuple[tuple[float, float], ...]:
    return tuple((-halfwidth, halfwidth) for _ in range(4))


def flat_chart() -> MetricChart:
    def metric(pts):
        n = pts.shape[0]
        return np.broadcast_to(np.eye(4), (n, 4, 4)).copy()

    def dmetric(pts):
        return np.zeros((pts.shape[0], 4, 4, 4))

    return MetricChart(
        name="flat-box",
        bounds=tuple((0.0, 1.0) for _ in range(4)),
        metric=metric,
        dmetric=dmetric,
    )


def _sphere_conformal(radius2: float):
    """Conformal factor of the stereographic chart of S^4 (radius^2 scaling).

    g = psi^2 delta with psi = 2 r^2/(r^2 + |x|^2); radius r = 1 gives the
    unit round sphere with scalar curvature 12.
    """

    def metric(pts):
        rho = np.einsum("ni,ni->n", pts, pts)
        psi = 2.0 * radius2 / (radius2 + rho)
        return psi[:, None, None] ** 2 * np.eye(4)

    def dmetric(pts):
        rho = np.einsum("ni,ni->n", pts, pts)
        psi = 2.0 * radius2 / (radius2 + rho)
        # d_k psi = -psi^2 x_k / radius2 ; d_k g_ij = 2 psi d_k psi delta_ij
        dpsi = -(psi**2)[:, None] * pts / radius2
        return 2.0 * (psi[:, None] * dpsi)[:, :, None, None] * np.eye(4)

    return metric, dmetric


def _radial_partition(power: int = 4):
    """sigma(x) = 1/(1 + |x|^(2 power)); sigma(x) + sigma(x/|x|^2) = 1."""

    def weight(pts):
        rho = np.einsum("ni,ni->n", pts, pts)
        return 1.0 / (1.0 + rho**power)

    return weight


def s4_charts(halfwidth: float = 3.2) -> tuple[MetricChart, ...]:
    metric, dmetric = _sphere_conformal(1.0)
    weight = _radial_partition()
    north = MetricChart("s4:north", _box(halfwidth), metric, dmetric, weight, orientation=1)
    south = MetricChart("s4:south", _box(halfwidth), metric, dmetric, weight, orientation=-1)
    return (north, south)


def s2xs2_charts(a: float = 1.0, b: float = 1.0, halfwidth_scale: float = 3.2) -> tuple[MetricChart, ...]:
    """Product of round 2-spheres of radii a and b, four stereographic charts."""
    a2, b2 = a * a, b * b

    def metric(pts):
        u2 = np.einsum("ni,ni->n", pts[:, :2], pts[:, :2])
        v2 = np.einsum("ni,ni->n", pts[:, 2:], pts[:, 2:])
        phia = 2.0 * a2 / (a2 + u2)
        phib = 2.0 * b2 / (b2 + v2)
        g = np.zeros((pts.shape[0], 4, 4))
        g[:, 0, 0] = g[:, 1, 1] = phia**2
        g[:, 2, 2] = g[:, 3, 3] = phib**2
        return g

    def dmetric(pts):
        u2 = np.einsum("ni,ni->n", pts[:, :2], pts[:, :2])
        v2 = np.einsum("ni,ni->n", pts[:, 2:], pts[:, 2:])
        phia = 2.0 * a2 / (a2 + u2)
        phib = 2.0 * b2 / (b2 + v2)
        dg = np.zeros((pts.shape[0], 4, 4, 4))
        # d_k phi = -x_k phi^2 / r^2 within its own factor
        dphia = -(phia**2)[:, None] * pts[:, :2] / a2
        dphib = -(phib**2)[:, None] * pts[:, 2:] / b2
        for k in range(2):
            dg[:, k, 0, 0] = dg[:, k, 1, 1] = 2.0 * phia * dphia[:, k]
        for k in range(2):
            dg[:, 2 + k, 2, 2] = dg[:, 2 + k, 3, 3] = 2.0 * phib * dphib[:, k]
        return dg

    def weight(pts):
        # same formula in every chart's own coordinates: the per-factor
        # inversion u -> a^2 u/|u|^2 swaps sigma and 1 - sigma
        u2 = np.einsum("ni,ni->n", pts[:, :2], pts[:, :2])
        v2 = np.einsum("ni,ni->n", pts[:, 2:], pts[:, 2:])
        return 1.0 / (1.0 + (u2 / a2) ** 4) / (1.0 + (v2 / b2) ** 4)

    bounds = tuple(
        [(-halfwidth_scale * a, halfwidth_scale * a)] * 2
        + [(-halfwidth_scale * b, halfwidth_scale * b)] * 2
    )
    charts = []
    # a chart per choice of pole in each factor; per-factor inversion is
    # orientation-reversing in 2d, so mixed charts flip the orientation
    for pa, flip_a in (("n", False), ("s", True)):
        for pb, flip_b in (("n", False), ("s", True)):
            orient = -1 if flip_a != flip_b else 1
            charts.append(
                MetricChart(
                    name=f"s2xs2:{pa}{pb}",
                    bounds=bounds,
                    metric=metric,
                    dmetric=dmetric,
                    weight=weight,
                    orientation=orient,
                )
            )
    return tuple(charts)


def _cp2_metric(pts):
    """Fubini-Study in an affine chart, coordinates (x1, y1, x2, y2).

    With z_j = x_j + i y_j and rho = |z|^2,

        g = I/(1+rho) - (v v^T + (Jv)(Jv)^T)/(1+rho)^2

    where v = (x1, y1, x2, y2) and J rotates each complex factor by 90
    degrees.  This is the metric of holomorphic sectional curvature 4:
    Einstein with s = 24 and volume pi^2/2.
    """
    rho = np.einsum("ni,ni->n", pts, pts)
    jv = np.empty_like(pts)
    jv[:, 0] = -pts[:, 1]
    jv[:, 1] = pts[:, 0]
    jv[:, 2] = -pts[:, 3]
    jv[:, 3] = pts[:, 2]
    one = 1.0 + rho
    g = np.eye(4) / one[:, None, None]
    g -= (
        np.einsum("ni,nj->nij", pts, pts) + np.einsum("ni,nj->nij", jv, jv)
    ) / (one**2)[:, None, None]
    return g


def _cp2_dmetric(pts):
    n = pts.shape[0]
    rho = np.einsum("ni,ni->n", pts, pts)
    one = 1.0 + rho
    jv = np.empty_like(pts)
    jv[:, 0] = -pts[:, 1]
    jv[:, 1] = pts[:, 0]
    jv[:, 2] = -pts[:, 3]
    jv[:, 3] = pts[:, 2]
    proj = np.einsum("ni,nj->nij", pts, pts) + np.einsum("ni,nj->nij", jv, jv)

    eye = np.eye(4)
    je = np.zeros((4, 4))  # columns J e_k
    je[1, 0], je[0, 1], je[3, 2], je[2, 3] = 1.0, -1.0, 1.0, -1.0

    dg = np.zeros((n, 4, 4, 4))
    for k in range(4):
        drho = 2.0 * pts[:, k]
        dproj = (
            np.einsum("i,nj->nij", eye[k], pts)
            + np.einsum("ni,j->nij", pts, eye[k])
            + np.einsum("i,nj->nij", je[:, k], jv)
            + np.einsum("ni,j->nij", jv, je[:, k])
        )
        dg[:, k] = (
            -drho[:, None, None] * eye / (one**2)[:, None, None]
            - dproj / (one**2)[:, None, None]
            + 2.0 * drho[:, None, None] * proj / (one**3)[:, None, None]
        )
    return dg


def _cp2_weight(pts):
    """Partition |Z_0|^8 / sum |Z_j|^8 in this chart's affine coordinates."""
    r1 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    r2 = pts[:, 2] ** 2 + pts[:, 3] ** 2
    return 1.0 / (1.0 + r1**4 + r2**4)


def cp2_charts(halfwidth: float = 3.6) -> tuple[MetricChart, ...]:
    # the three standard affine charts carry the same metric formula in
    # their own coordinates by the symmetry of the homogeneous construction
    return tuple(
        MetricChart(
            name=f"cp2:affine{i}",
            bounds=_box(halfwidth),
            metric=_cp2_metric,
            dmetric=_cp2_dmetric,
            weight=_cp2_weight,
            orientation=1,
        )
        for i in range(3)
    )


_S2XS2_RE = re.compile(r"^s2xs2\(\s*([0-9.]+)\s*,\s*([0-9.]+)\s*\)$")


def catalog_metric(name: str) -> CatalogMetric:
    """Look up a catalog metric by CLI name: s4, s2xs2(a,b), cp2-fs, flat-box."""
    key = name.strip().lower()
    if key == "s4":
        return CatalogMetric(
            name="s4",
            charts=s4_charts(),
            chi=2,
            tau=0,
            closed=True,
            kahler=False,
            expected_scalar=12.0,
            expected_volume=8.0 * np.pi**2 / 3.0,
        )
    if key in ("s2xs2", "s2xs2(1,1)"):
        key = "s2xs2(1.0,1.0)"
    m = _S2XS2_RE.match(key)
    if m:
        a, b = float(m.group(1)), float(m.group(2))
        expected_s = 2.0 / a**2 + 2.0 / b**2
        return CatalogMetric(
            name=f"s2xs2({a:g},{b:g})",
            charts=s2xs2_charts(a, b),
            chi=4,
            tau=0,
            closed=True,
            kahler=True,
            expected_scalar=expected_s,
            expected_volume=16.0 * np.pi**2 * a**2 * b**2,
        )
    if key == "cp2-fs":
        return CatalogMetric(
            name="cp2-fs",
            charts=cp2_charts(),
            chi=3,
            tau=1,
            closed=True,
            kahler=True,
            expected_scalar=24.0,
            expected_volume=np.pi**2 / 2.0,
        )
    if key == "flat-box":
        return CatalogMetric(
            name="flat-box",
            charts=(flat_chart(),),
            chi=None,
            tau=None,
            closed=False,
            kahler=False,
            expected_scalar=0.0,
            expected_volume=1.0,
        )
    raise ValueError(f"unknown catalog metric {name!r}")


def catalog_metric_names() -> list[str]:
    return ["s4", "s2xs2(a,b)", "cp2-fs", "flat-box"]
