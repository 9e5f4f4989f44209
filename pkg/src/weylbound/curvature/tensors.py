"""Pointwise curvature of a metric chart and its irreducible decomposition.

Conventions (verified against the round sphere, the product of round
2-spheres, and Fubini-Study):

* Christoffel: Gamma^k_ij = (1/2) g^{kl} (d_i g_lj + d_j g_li - d_l g_ij).
* Riemann (1,3): R^r_{s m u} = d_m Gamma^r_{us} - d_u Gamma^r_{ms}
  + Gamma^r_{ma} Gamma^a_{us} - Gamma^r_{ua} Gamma^a_{ms}; indices are
  lowered on the first slot, giving R_{rsmu} antisymmetric in (r,s) and
  (m,u) with symmetric pair swap, and R_{rsmu} = g_{rm} g_{su} - g_{ru} g_{sm}
  on the unit round sphere (sectional curvature +1, scalar 12).
* Ricci contracts the first and third slots; s is its metric trace.
* Weyl: W = R - P x g (Kulkarni-Nomizu) with Schouten P = (Ric - s/6 g)/2.
* Norms: |W|^2 = (1/4) W_{ijkl} W^{ijkl}, which equals the Frobenius norm
  of the 6x6 Weyl operator on an orthonormal basis of 2-forms; |ric0|^2 is
  the plain ric0_{ij} ric0^{ij}.
* W+/W- are the 3x3 blocks of the Weyl operator on the +/-1 eigenspaces of
  the Hodge star of an oriented orthonormal coframe.  The coframe comes
  from the Cholesky factor of g (sequential Gram-Schmidt of the coordinate
  coframe, so its orientation matches the chart's coordinates); a chart of
  orientation -1 swaps the two blocks, making orientation reversal an exact
  float-for-float swap of |W+|^2 and |W-|^2.

First derivatives of the metric are analytic when the chart supplies them,
otherwise central differences of the metric; the Christoffel symbols are
then differentiated by a second central difference with a larger step to
keep amplified rounding below the 1e-6 symmetry tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..common import SingularMetricError
from .charts import MetricChart

# ordered 2-form basis: the first three wedge with the last three to +vol
_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))

_SQRT6_OVER_18 = np.sqrt(6.0) / 18.0


@dataclass(frozen=True)
class CurvatureDecomposition:
    """Pointwise scalar/traceless-Ricci/Weyl data in the paper norms."""

    s: float
    ricci: np.ndarray
    r0_norm2: float
    wplus_norm2: float
    wminus_norm2: float
    wplus_eigenvalues: tuple[float, float, float]


def _chart_scale(chart: MetricChart) -> float:
    return max(1.0, max(abs(lo) for lo, _ in chart.bounds), max(abs(hi) for _, hi in chart.bounds))


def metric_at(chart: MetricChart, pts: np.ndarray, check: bool = False) -> np.ndarray:
    g = chart.metric(pts)
    if check:
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise SingularMetricError(
                f"{chart.name}: metric not positive definite at a sample point"
            ) from None
    return g


def metric_derivatives(chart: MetricChart, pts: np.ndarray, use_analytic: bool = True) -> np.ndarray:
    """d_k g_ij, analytic when available else central differences."""
    if use_analytic and chart.dmetric is not None:
        return chart.dmetric(pts)
    h = chart.fd_step * _chart_scale(chart)
    dg = np.empty((pts.shape[0], 4, 4, 4))
    for k in range(4):
        step = np.zeros(4)
        step[k] = h
        dg[:, k] = (chart.metric(pts + step) - chart.metric(pts - step)) / (2.0 * h)
    return dg


def christoffel(chart: MetricChart, pts: np.ndarray, use_analytic: bool = True) -> np.ndarray:
    """Gamma^k_{ij} as an (N, 4, 4, 4) array indexed [n, k, i, j]."""
    g = metric_at(chart, pts)
    ginv = np.linalg.inv(g)
    dg = metric_derivatives(chart, pts, use_analytic)
    # T[n,i,j,l] = d_i g_lj + d_j g_li - d_l g_ij
    t = np.einsum("nilj->nijl", dg) + np.einsum("njli->nijl", dg) - np.einsum("nlij->nijl", dg)
    return 0.5 * np.einsum("nkl,nijl->nkij", ginv, t)


def riemann_batch(chart: MetricChart, pts: np.ndarray, use_analytic: bool = True) -> np.ndarray:
    """Lowered curvature tensor R_{rsmu} at each point, shape (N, 4, 4, 4, 4)."""
    g = metric_at(chart, pts, check=True)
    gamma = christoffel(chart, pts, use_analytic)

    # second derivatives amplify rounding; with analytic first derivatives
    # the Christoffel noise is machine-level and a small step is optimal,
    # while the double-difference path needs a larger one
    analytic = use_analytic and chart.dmetric is not None
    h = (2.0 if analytic else 30.0) * chart.fd_step * _chart_scale(chart)
    dgamma = np.empty((pts.shape[0], 4, 4, 4, 4))
    for d in range(4):
        step = np.zeros(4)
        step[d] = h
        dgamma[:, d] = (
            christoffel(chart, pts + step, use_analytic)
            - christoffel(chart, pts - step, use_analytic)
        ) / (2.0 * h)

    # R^r_{smu} = d_m G^r_{us} - d_u G^r_{ms} + G^r_{ma} G^a_{us} - G^r_{ua} G^a_{ms}
    term1 = dgamma.transpose(0, 2, 4, 1, 3)  # [n,m,r,u,s] -> [n,r,s,m,u]
    term2 = dgamma.transpose(0, 2, 4, 3, 1)  # [n,u,r,m,s] -> [n,r,s,m,u]
    term3 = np.einsum("nrma,naus->nrsmu", gamma, gamma)
    term4 = np.einsum("nrua,nams->nrsmu", gamma, gamma)
    r_up = term1 - term2 + term3 - term4
    return np.einsum("nra,nasmu->nrsmu", g, r_up)


def riemann_at(chart: MetricChart, point) -> np.ndarray:
    """Full lowered curvature tensor at a single point."""
    pts = np.asarray(point, dtype=float).reshape(1, 4)
    return riemann_batch(chart, pts)[0]


def symmetry_residuals(riem: np.ndarray) -> dict[str, float]:
    """Max-norm residuals of the algebraic curvature symmetries."""
    r = riem if riem.ndim == 5 else riem[None]
    scale = 1.0 + np.abs(r).max()
    first = np.abs(r + r.transpose(0, 2, 1, 3, 4)).max()
    second = np.abs(r + r.transpose(0, 1, 2, 4, 3)).max()
    swap = np.abs(r - r.transpose(0, 3, 4, 1, 2)).max()
    bianchi = np.abs(
        r + r.transpose(0, 1, 3, 4, 2) + r.transpose(0, 1, 4, 2, 3)
    ).max()
    return {
        "pair1_antisymmetry": first / scale,
        "pair2_antisymmetry": second / scale,
        "pair_swap": swap / scale,
        "first_bianchi": bianchi / scale,
    }


def weyl_trace_residual(weyl: np.ndarray, ginv: np.ndarray) -> float:
    """Largest metric trace of the Weyl tensor over all slot pairs."""
    w = weyl if weyl.ndim == 5 else weyl[None]
    gi = ginv if ginv.ndim == 3 else ginv[None]
    scale = 1.0 + np.abs(w).max()
    worst = 0.0
    slot_pairs = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    letters = "rsmu"
    for a, b in slot_pairs:
        spec_in = "n" + "".join(letters)
        ia, ib = letters[a - 1], letters[b - 1]
        spec = f"n{ia}{ib}," + spec_in + "->n" + "".join(c for c in letters if c not in (ia, ib))
        worst = max(worst, np.abs(np.einsum(spec, gi, w)).max())
    return worst / scale


@dataclass
class FieldBatch:
    """Vectorized curvature data at a batch of chart points."""

    s: np.ndarray
    ricci: np.ndarray
    r0_norm2: np.ndarray
    wplus_norm2: np.ndarray
    wminus_norm2: np.ndarray
    sqrt_det: np.ndarray
    wplus_eigenvalues: np.ndarray | None = None
    wplus_det: np.ndarray | None = None


def decompose_batch(
    riem: np.ndarray,
    g: np.ndarray,
    orientation: int = 1,
    want_eigenvalues: bool = False,
) -> FieldBatch:
    ginv = np.linalg.inv(g)
    chol = np.linalg.cholesky(g)
    sqrt_det = np.prod(np.diagonal(chol, axis1=1, axis2=2), axis=1)

    ricci = np.einsum("nrm,nrsmu->nsu", ginv, riem)
    s = np.einsum("nsu,nsu->n", ginv, ricci)

    r0 = ricci - 0.25 * s[:, None, None] * g
    r0_norm2 = np.einsum("nij,nkl,nik,njl->n", r0, r0, ginv, ginv)

    schouten = 0.5 * (ricci - (s / 6.0)[:, None, None] * g)
    kn = (
        np.einsum("nik,njl->nijkl", g, schouten)
        - np.einsum("nil,njk->nijkl", g, schouten)
        + np.einsum("njl,nik->nijkl", g, schouten)
        - np.einsum("njk,nil->nijkl", g, schouten)
    )
    weyl = riem - kn

    # frame components in the Cholesky coframe (orientation-consistent)
    x = np.linalg.inv(chol)  # rows are the frame vectors
    w = np.einsum("nai,nibcd->nabcd", x, np.einsum("nbj,nijcd->nibcd", x, np.einsum("nck,nijkd->nijcd", x, np.einsum("ndl,nijkl->nijkd", x, weyl))))

    m6 = np.empty((riem.shape[0], 6, 6))
    for p, (a, b) in enumerate(_PAIRS):
        for q, (c, d) in enumerate(_PAIRS):
            m6[:, p, q] = w[:, a, b, c, d]

    ee, ef, fe, ff = m6[:, :3, :3], m6[:, :3, 3:], m6[:, 3:, :3], m6[:, 3:, 3:]
    bplus = 0.5 * (ee + ef + fe + ff)
    bminus = 0.5 * (ee - ef - fe + ff)
    if orientation < 0:
        bplus, bminus = bminus, bplus

    wplus_norm2 = np.einsum("npq,npq->n", bplus, bplus)
    wminus_norm2 = np.einsum("npq,npq->n", bminus, bminus)

    eigs = det = None
    if want_eigenvalues:
        sym = 0.5 * (bplus + bplus.transpose(0, 2, 1))
        eigs = np.linalg.eigvalsh(sym)[:, ::-1]
        det = np.linalg.det(sym)

    return FieldBatch(
        s=s,
        ricci=ricci,
        r0_norm2=r0_norm2,
        wplus_norm2=wplus_norm2,
        wminus_norm2=wminus_norm2,
        sqrt_det=sqrt_det,
        wplus_eigenvalues=eigs,
        wplus_det=det,
    )


def decompose(riem: np.ndarray, g: np.ndarray, orientation: int = 1) -> CurvatureDecomposition:
    """Single-point decomposition into (s, ric0, W+, W-) with paper norms."""
    batch = decompose_batch(riem[None], g[None], orientation, want_eigenvalues=True)
    return CurvatureDecomposition(
        s=float(batch.s[0]),
        ricci=batch.ricci[0],
        r0_norm2=float(batch.r0_norm2[0]),
        wplus_norm2=float(batch.wplus_norm2[0]),
        wminus_norm2=float(batch.wminus_norm2[0]),
        wplus_eigenvalues=tuple(float(v) for v in batch.wplus_eigenvalues[0]),
    )


def curvature_fields(
    chart: MetricChart,
    pts: np.ndarray,
    use_analytic: bool = True,
    want_eigenvalues: bool = False,
) -> FieldBatch:
    riem = riemann_batch(chart, pts, use_analytic)
    g = metric_at(chart, pts)
    return decompose_batch(riem, g, chart.orientation, want_eigenvalues)


def check_kahler_eigenstructure(
    charts,
    sample_count: int = 64,
    seed: int = 7,
    scalar_link: bool = False,
) -> float:
    """Largest deviation of the W+ spectrum from the two-eigenvalue shape.

    At each sample the spectrum is compared against (2c, -c, -c) with
    c = |W+|/sqrt(6), and det W+ against its saturated value
    (sqrt(6)/18)|W+|^3, both exact iff W+ has at most two eigenvalues.
    With ``scalar_link`` (Kahler metrics) the top eigenvalue is also checked
    against s/6, i.e. |W+| = s/(2 sqrt 6).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for chart in charts:
        lo = np.array([b[0] for b in chart.bounds])
        hi = np.array([b[1] for b in chart.bounds])
        pts = lo + (hi - lo) * rng.random((sample_count, 4))
        fields = curvature_fields(chart, pts, want_eigenvalues=True)
        c = np.sqrt(fields.wplus_norm2 / 6.0)
        model = np.stack([2.0 * c, -c, -c], axis=1)
        worst = max(worst, np.abs(fields.wplus_eigenvalues - model).max())
        saturated = _SQRT6_OVER_18 * fields.wplus_norm2 ** 1.5
        worst = max(worst, np.abs(fields.wplus_det - saturated).max())
        if scalar_link:
            worst = max(worst, np.abs(fields.wplus_eigenvalues[:, 0] - fields.s / 6.0).max())
    return float(worst)
