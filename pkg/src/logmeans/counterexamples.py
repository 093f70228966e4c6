"""
Extremal bump inputs and the quantitative divergence experiments built on the
kernel lower bound: pointwise means of concentrated bumps over the shrunken
region, restricted L1 growth, exceedance-set geometry, and the operator-norm
probe against a Young function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction2D, GridResolutionError
from .kernels import (
    REGION_J,
    build_region,
    gamma,
    phase_rate,
    beta,
    stratified_samples,
)
from .fourier import dirichlet_matrix
from .means import harmonic_number
from .orlicz import YoungFunction

#: ((pi/2 - arccos(1/4)) / 8)^2, the scaling applied to the normalized bump.
BUMP_PREFACTOR = ((0.5 * math.pi - math.acos(0.25)) / 8.0) ** 2


@dataclass(frozen=True)
class BumpSpec:
    """Geometry of a concentrated square bump at scale n, snapped to a grid."""

    n: int
    scaled: bool
    support_hi: float          # snapped right edge of [0, support_hi]^2
    height: float              # exact 1/gamma^2 (times the prefactor if scaled)
    snapped_measure: float
    target_measure: float      # gamma(n)^2
    measure_discrepancy: float  # snapped/target - 1


def make_bump(n: int, scaled: bool, grid_size: int) -> tuple[GridFunction2D, BumpSpec]:
    """
    Grid indicator of [0, gamma(n)]^2 with exact height 1/gamma(n)^2 (times
    the bump prefactor when ``scaled``).  The support is snapped to whole
    grid cells; the snapped-vs-analytic measure discrepancy is reported in
    the returned BumpSpec.
    """
    min_grid = 16.0 * phase_rate(n) / math.pi
    if grid_size < min_grid:
        raise GridResolutionError(
            f"grid {grid_size} too coarse for bump scale {n} (need >= {min_grid:.0f})"
        )
    g = gamma(n)
    h = 2.0 * math.pi / grid_size
    cells = max(1, round(g / h))
    height = (BUMP_PREFACTOR if scaled else 1.0) / g ** 2
    values = np.zeros((grid_size, grid_size), dtype=complex)
    origin = grid_size // 2  # index of the sample at x = 0
    values[origin : origin + cells, origin : origin + cells] = height
    grid = GridFunction2D(values=values, is_real=True)
    snapped = (cells * h) ** 2
    spec = BumpSpec(
        n=n,
        scaled=scaled,
        support_hi=cells * h,
        height=height,
        snapped_measure=snapped,
        target_measure=g ** 2,
        measure_discrepancy=snapped / g ** 2 - 1.0,
    )
    return grid, spec


def bump_mean_many(
    n: int,
    xs: np.ndarray,
    ys: np.ndarray,
    scaled: bool = True,
    quad_points: int = 16,
) -> np.ndarray:
    """
    The order-2^{2n} logarithmic mean of the bump at the given points,
    evaluated through the kernel-convolution path with the averaging over the
    exact support [0, gamma(n)]^2 done by Gauss-Legendre quadrature
    (the kernel phase drifts by well under a radian across the support, so a
    modest node count is spectrally accurate).
    """
    if n < 1:
        raise ValueError(f"scale must be >= 1, got {n}")
    N = 4 ** n
    g = gamma(n)
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    nodes = 0.5 * g * (nodes + 1.0)
    weights = 0.5 * g * weights

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    orders = np.arange(N)
    ax = np.zeros((N, len(xs)))
    ay = np.zeros((N, len(ys)))
    for node, w in zip(nodes, weights):
        ax += w * dirichlet_matrix(orders, xs - node)
        ay += w * dirichlet_matrix(orders, ys - node)
    inv = 1.0 / (N - orders)
    raw = inv @ (ax * ay)
    height = (BUMP_PREFACTOR if scaled else 1.0) / g ** 2
    return height * raw / (harmonic_number(N) * math.pi ** 2)


def bump_mean(n: int, x: float, y: float, scaled: bool = True, quad_points: int = 16) -> float:
    return float(bump_mean_many(n, np.array([x]), np.array([y]), scaled, quad_points)[0])


@dataclass(frozen=True)
class BumpMeanReport:
    n: int
    min_ratio: float
    argmin: tuple[float, float]
    samples: int


def bump_mean_lower_bound(n: int, samples_per_rect: int = 9) -> BumpMeanReport:
    """
    Minimum of x y t_{2^{2n}}(scaled bump; x, y) over a stratified sample of
    the shrunken region: the desk-scale content of the pointwise lower bound
    t >= c / (x y) there.
    """
    region = build_region(n, REGION_J)
    pts = stratified_samples(region, samples_per_rect)
    xs, ys = pts[:, 0], pts[:, 1]
    vals = bump_mean_many(n, xs, ys, scaled=True)
    ratios = xs * ys * vals
    arg = int(np.argmin(ratios))
    return BumpMeanReport(
        n=n,
        min_ratio=float(ratios[arg]),
        argmin=(float(xs[arg]), float(ys[arg])),
        samples=len(xs),
    )


@dataclass(frozen=True)
class GrowthReport:
    n: int
    l1_lower: float
    geometric_sum: float


def geometric_sum(n: int) -> float:
    """
    Exact Int over the shrunken region of dx dy / (x y): per rectangle the
    integral factorizes into a product of log ratios of the endpoints.
    """
    region = build_region(n, REGION_J)
    return math.fsum(
        math.log(bx / ax) * math.log(by / ay) for ax, bx, ay, by in region.rectangles
    )


def l1_growth(n: int, quad_per_rect: int = 12) -> GrowthReport:
    """
    Region-restricted lower bound on || t_{2^{2n}}(scaled bump) ||_1: the
    quadrature of |t| over the shrunken region only (the inexpensive part the
    quadratic growth estimate actually bounds), next to the exact geometric
    integral of 1/(x y) over the same region.
    """
    region = build_region(n, REGION_J)
    nodes, weights = np.polynomial.legendre.leggauss(quad_per_rect)
    total = 0.0
    for ax, bx, ay, by in region.rectangles:
        sx = 0.5 * (bx - ax) * (nodes + 1.0) + ax
        sy = 0.5 * (by - ay) * (nodes + 1.0) + ay
        wx = 0.5 * (bx - ax) * weights
        wy = 0.5 * (by - ay) * weights
        xx, yy = np.meshgrid(sx, sy, indexing="ij")
        vals = bump_mean_many(n, xx.ravel(), yy.ravel(), scaled=True)
        vals = np.abs(vals).reshape(quad_per_rect, quad_per_rect)
        total += float(wx @ vals @ wy)
    return GrowthReport(n=n, l1_lower=total, geometric_sum=geometric_sum(n))


@dataclass(frozen=True)
class ExceedanceReport:
    n: int
    c1: float
    measure: float
    bound: float


def _rect_area_under_hyperbola(ax: float, bx: float, ay: float, by: float, theta: float) -> float:
    """Exact area of {(x, y) in [ax,bx] x [ay,by] : x y < theta} for 0 < ax, 0 < ay."""
    if theta <= ax * ay:
        return 0.0
    if theta >= bx * by:
        return (bx - ax) * (by - ay)
    x1 = min(max(theta / by, ax), bx)
    x2 = min(max(theta / ay, ax), bx)
    area = (x1 - ax) * (by - ay)
    if x2 > x1:
        area += theta * math.log(x2 / x1) - ay * (x2 - x1)
    return area


def exceedance_measure(
    n: int,
    c1: float,
    bound_coeff: float | None = None,
) -> ExceedanceReport:
    """
    Measure of the subset of the shrunken region where the kernel lower bound
    t >= bound_coeff / (x y) certifies |t| > c1 * 2^{3n}; equivalently the
    exact region geometry {x y < bound_coeff / (c1 2^{3n})}, computed
    analytically per rectangle.  ``bound_coeff`` defaults to c1 (the fitted
    constant plays both roles), in which case the threshold reduces to
    1/(x y) > 2^{3n}.  ``bound`` is the normalized ratio measure * 2^{3n} / n.
    """
    if c1 < 0.0:
        raise ValueError(f"threshold coefficient must be >= 0, got {c1}")
    region = build_region(n, REGION_J)
    scale = float(2 ** (3 * n))
    if c1 == 0.0:
        measure = region.total_measure()
    else:
        coeff = c1 if bound_coeff is None else bound_coeff
        theta = coeff / (c1 * scale)
        measure = math.fsum(
            _rect_area_under_hyperbola(ax, bx, ay, by, theta)
            for ax, bx, ay, by in region.rectangles
        )
    return ExceedanceReport(n=n, c1=c1, measure=measure, bound=measure * scale / n)


def r_nm(n: int, m: int) -> int:
    """
    Largest window index l with beta(l, n) <= 1 / (2^{3n} (beta(m, n) -
    gamma(n))) + gamma(n), by direct scan (beta is increasing in l), or 0
    when no l qualifies.  Grows like 2^n / m.
    """
    if n < 3:
        raise ValueError(f"scale must be >= 3, got {n}")
    if not 1 <= m <= 2 ** (n - 3):
        raise ValueError(f"window index must lie in [1, 2^(n-3)], got {m}")
    g = gamma(n)
    rhs = 1.0 / (2 ** (3 * n) * (beta(m, n) - g)) + g
    r = 0
    l = 1
    while beta(l, n) <= rhs:
        r = l
        l += 1
    return r


@dataclass(frozen=True)
class ProbeReport:
    n: int
    young: str
    l1_lower: float
    ratio: float


def operator_norm_probe(n: int, Q: YoungFunction, l1_lower: float | None = None) -> ProbeReport:
    """
    Desk-scale probe of the operator-norm divergence mechanism: the ratio
    l1_lower(n) * 2^{4n} / Q(2^{4n}).  Growth of the ratio in n signals a
    Young function too weak to control the means; pass a precomputed
    ``l1_lower`` to amortize the quadrature across several Q.
    """
    if l1_lower is None:
        l1_lower = l1_growth(n).l1_lower
    u = float(2 ** (4 * n))
    ratio = l1_lower * u / float(Q(u))
    return ProbeReport(n=n, young=Q.name, l1_lower=l1_lower, ratio=ratio)
