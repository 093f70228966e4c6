"""
The logarithmic-mean kernel F_N in direct and closed form, the trigonometric
identities behind its lower bound, and the two-scale region geometry.

Closed form.  Writing D~_N(u) = sin((N+1/2)u) / (2 sin(u/2)) and
Phi_m(u) = sin^2(m u/2) / (2 sin^2(u/2)) (a Fejer-type ratio), double Abel
summation gives the exact identity

    sum_{k=1}^{N} cos(ku)/k
        = sum_{k=1}^{N-2} [2 / (k(k+1)(k+2))] Phi_{k+1}(u)
          + Phi_N(u) / (N(N-1)) + D~_N(u) / N - 3/4.

Substituting it into the product expansion of H_N * F_N(x, y) yields fifteen
terms R_1..R_15 (four telescoped main terms, nine explicit remainders, two
sine-sum cross terms).  The cubic decay of the telescoped weights makes the
first sum truncatable with a certified tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import dirichlet_kernel, dirichlet_matrix
from .means import harmonic_number

ARCCOS_QUARTER = math.acos(0.25)
HALF_PI = 0.5 * math.pi
#: gamma(n) = GAMMA_SCALE / (2^{2n} + 1/2)
GAMMA_SCALE = (HALF_PI - ARCCOS_QUARTER) / 4.0

#: Default keep-out distance from the removable-singularity tubes.
EPS_SING = 1e-6

REGION_I = "I"
REGION_J = "J"


class EmptyRegionError(ValueError):
    """The requested region has no rectangles (n too small without an override)."""


class SingularArgumentError(ValueError):
    """A trigonometric sum was requested at a singular argument (u = 0 mod 2*pi)."""


class SingularTubeError(ValueError):
    """Closed-form evaluation requested too close to a singular tube."""


class RegionMembershipError(ValueError):
    """A point expected inside the region geometry is not."""


def phase_rate(n: int) -> float:
    """Oscillation rate 2^{2n} + 1/2 of the phase (2^{2n} + 1/2) x."""
    if n < 1:
        raise ValueError(f"scale must be >= 1, got {n}")
    return float(4 ** n) + 0.5


def alpha(m: int, n: int) -> float:
    """Left endpoint (arccos(1/4) + 2 pi m) / (2^{2n} + 1/2) of the m-th phase window."""
    if m < 0:
        raise ValueError(f"window index must be >= 0, got {m}")
    return (ARCCOS_QUARTER + 2.0 * math.pi * m) / phase_rate(n)


def beta(m: int, n: int) -> float:
    """Right endpoint (pi/2 + 2 pi m) / (2^{2n} + 1/2) of the m-th phase window."""
    if m < 0:
        raise ValueError(f"window index must be >= 0, got {m}")
    return (HALF_PI + 2.0 * math.pi * m) / phase_rate(n)


def gamma(n: int) -> float:
    """Shrink margin (pi/2 - arccos(1/4)) / (4 (2^{2n} + 1/2)); one quarter window width."""
    return GAMMA_SCALE / phase_rate(n)


@dataclass(frozen=True)
class RegionSpec:
    """
    Union of axis-aligned rectangles [alpha_m, beta_m] x [alpha_l, beta_l]
    over 1 <= l, m <= m_max (kind I), each shrunk by gamma(n) on all four
    sides for kind J.
    """

    n: int
    kind: str
    m_max: int
    rectangles: tuple[tuple[float, float, float, float], ...]

    def total_measure(self) -> float:
        return math.fsum((b - a) * (d - c) for a, b, c, d in self.rectangles)

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        return any(
            a - tol <= x <= b + tol and c - tol <= y <= d + tol
            for a, b, c, d in self.rectangles
        )


def build_region(n: int, kind: str, m_max_override: int | None = None) -> RegionSpec:
    """
    Build the two-dimensional region of scale n.  The index bound defaults to
    2^{n-3} per axis (so n >= 3 is required unless an override is given); the
    second window constraint is applied to y, making the region a genuine
    product of phase windows.
    """
    if kind not in (REGION_I, REGION_J):
        raise ValueError(f"region kind must be {REGION_I!r} or {REGION_J!r}, got {kind!r}")
    if m_max_override is not None:
        if m_max_override < 1:
            raise EmptyRegionError(f"m_max override must be >= 1, got {m_max_override}")
        m_max = m_max_override
    else:
        if n < 3:
            raise EmptyRegionError(f"region is empty for n = {n} (2^(n-3) < 1); pass an override")
        m_max = 2 ** (n - 3)
    shrink = gamma(n) if kind == REGION_J else 0.0
    intervals = []
    for m in range(1, m_max + 1):
        lo, hi = alpha(m, n) + shrink, beta(m, n) - shrink
        if hi <= lo:
            raise EmptyRegionError(f"window {m} collapses after shrinking at n = {n}")
        intervals.append((lo, hi))
    rects = tuple(
        (ax, bx, ay, by) for ax, bx in intervals for ay, by in intervals
    )
    return RegionSpec(n=n, kind=kind, m_max=m_max, rectangles=rects)


def stratified_samples(region: RegionSpec, per_axis: int = 9) -> np.ndarray:
    """
    Deterministic stratified sample of the region: an inclusive per_axis x
    per_axis lattice on every rectangle (corners included), concatenated in
    rectangle order.  Shape (P, 2).
    """
    if per_axis < 2:
        raise ValueError("need at least 2 samples per axis to include corners")
    chunks = []
    for ax, bx, ay, by in region.rectangles:
        xs = np.linspace(ax, bx, per_axis)
        ys = np.linspace(ay, by, per_axis)
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        chunks.append(np.column_stack([xx.ravel(), yy.ravel()]))
    return np.concatenate(chunks, axis=0)


# ----------------------------------------------------------------------------
# trigonometric sums
# ----------------------------------------------------------------------------

def cos_sum_direct(N: int, u: float) -> float:
    """sum_{k=1}^{N} cos(ku)/k by direct summation in ascending k order."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    k = np.arange(1, N + 1)
    return float(np.sum(np.cos(k * u) / k))


def sin_sum(N: int, u) -> float | np.ndarray:
    """sum_{k=1}^{N} sin(ku)/k by direct summation; uniformly bounded in N."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    k = np.arange(1, N + 1)
    out = np.sin(np.outer(u_arr, k)) @ (1.0 / k)
    if np.isscalar(u) or np.asarray(u).ndim == 0:
        return float(out[0])
    return out


def fejer_ratio(m: int, u) -> float | np.ndarray:
    """Phi_m(u) = sin^2(m u / 2) / (2 sin^2(u / 2)); limit m^2 / 2 at u = 0 mod 2*pi."""
    u_arr = np.asarray(u, dtype=float)
    half_sin = np.sin(0.5 * u_arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(0.5 * m * u_arr) ** 2 / (2.0 * half_sin ** 2)
    out = np.where(half_sin == 0.0, 0.5 * m * m, ratio)
    if np.isscalar(u) or u_arr.ndim == 0:
        return float(out)
    return out


def _telescoped_weights(k: np.ndarray) -> np.ndarray:
    return 2.0 / (k * (k + 1.0) * (k + 2.0))


def telescoped_tail_bound(K: int, N: int, u: float) -> float:
    """
    Certified bound on the discarded telescoped tail when the cubic-weight sum
    stops at K < N - 2: every term is at most 2/(k(k+1)(k+2)) / (2 sin^2(u/2))
    and the cubic tail sums below 1/K^2.  Returns 0 for the full sum.
    """
    if K >= N - 2:
        return 0.0
    s = math.sin(0.5 * u)
    if s == 0.0:
        raise SingularArgumentError("tail bound undefined at u = 0 mod 2*pi")
    return 1.0 / (2.0 * K * K * s * s)


def _telescoped_main_sum(N: int, u: float, K: int) -> float:
    """sum_{k=1}^{K} [2/(k(k+1)(k+2))] Phi_{k+1}(u), with the u = 0 limit."""
    k = np.arange(1, K + 1, dtype=float)
    w = _telescoped_weights(k)
    s = math.sin(0.5 * u)
    if s == 0.0:
        return float(np.sum(w * 0.5 * (k + 1.0) ** 2))
    num = np.sin(0.5 * (k + 1.0) * u) ** 2
    return float(np.sum(w * num) / (2.0 * s * s))


def cos_sum_telescoped(N: int, u: float, K: int) -> tuple[float, float]:
    """
    Evaluate sum_{k=1}^{N} cos(ku)/k through the telescoped closed form

        sum_{k=1}^{K} [2/(k(k+1)(k+2))] Phi_{k+1}(u)
        + Phi_N(u)/(N(N-1)) + D~_N(u)/N - 3/4,

    truncating the cubic-weight sum at K (1 <= K <= N-2) and returning
    (value, certified tail bound).  The Fejer remainder term enters with a
    plus sign; that is what makes the identity exact (checked against direct
    summation at machine precision), and it is consistent with the u -> 0
    limit where both sides reduce to the harmonic number H_N.
    """
    if N < 3:
        raise ValueError(f"telescoped form needs N >= 3, got {N}")
    if not 1 <= K <= N - 2:
        raise ValueError(f"truncation cap must satisfy 1 <= K <= N - 2, got {K}")
    if math.sin(0.5 * u) == 0.0:
        raise SingularArgumentError("cosine sum closed form is singular at u = 0 mod 2*pi")
    main = _telescoped_main_sum(N, u, K)
    value = (
        main
        + fejer_ratio(N, u) / (N * (N - 1.0))
        + dirichlet_kernel(N, u) / N
        - 0.75
    )
    return value, telescoped_tail_bound(K, N, u)


# ----------------------------------------------------------------------------
# kernel forms
# ----------------------------------------------------------------------------

def log_kernel_direct(N: int, t: float, s: float) -> float:
    """
    F_N(t, s) = (1/H_N) sum_{k=0}^{N-1} D_k(t) D_k(s) / (N - k), summed
    directly in ascending k order.  Total (no singularities); cost O(N).
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    k = np.arange(N)
    dt = dirichlet_matrix(k, np.array([t]))[:, 0]
    ds = dirichlet_matrix(k, np.array([s]))[:, 0]
    return float(np.sum(dt * ds / (N - k)) / harmonic_number(N))


def log_kernel_direct_many(N: int, t: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Vectorized log_kernel_direct over paired point arrays."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    k = np.arange(N)
    dt = dirichlet_matrix(k, t)  # (N, P)
    ds = dirichlet_matrix(k, s)
    w = 1.0 / (N - k)
    return (w @ (dt * ds)) / harmonic_number(N)


@dataclass(frozen=True)
class KernelEvaluation:
    """
    Closed-form kernel value with its 15-term breakdown (on the H_N * F_N
    scale, display order) and the certified truncation error of the value.
    """

    value: float
    terms: np.ndarray
    truncation_bound: float

    def __post_init__(self) -> None:
        terms = np.asarray(self.terms, dtype=float)
        if terms.shape != (15,):
            raise ValueError(f"expected 15 terms, got shape {terms.shape}")
        object.__setattr__(self, "terms", terms)

    def main_terms(self) -> float:
        """R_1 + R_2 + R_3 + R_4, the telescoped main part."""
        return float(np.sum(self.terms[:4]))

    def remainder_abs(self) -> float:
        """sum_{j=5}^{15} |R_j|, the part bounded by O(1/(xy))."""
        return float(np.sum(np.abs(self.terms[4:])))


def _tube_distance(u: float) -> float:
    """Distance from u to the nearest multiple of 2*pi."""
    r = math.remainder(u, 2.0 * math.pi)
    return abs(r)


def _sum_pair_values(N: int, u: float, K: int | None, tail_target: float):
    """(T, V, W, S, tail_bound, K_used) for one combined argument u = x +/- y."""
    if u == 0.0 or math.sin(0.5 * u) == 0.0:
        # removable on the diagonal: full sums, exact limits
        k = np.arange(1.0, N - 1.0)
        T = float(np.sum(_telescoped_weights(k) * 0.5 * (k + 1.0) ** 2))
        V = N / (2.0 * (N - 1.0))
        W = (N + 0.5) / N
        S = 0.0
        return T, V, W, S, 0.0, N - 2
    if K is None:
        K = _adaptive_cap(N, u, tail_target)
    T = _telescoped_main_sum(N, u, K)
    V = fejer_ratio(N, u) / (N * (N - 1.0))
    W = dirichlet_kernel(N, u) / N
    S = sin_sum(N, u)
    return T, V, W, S, telescoped_tail_bound(K, N, u), K


def _adaptive_cap(N: int, u: float, tail_target: float) -> int:
    """Smallest K with certified tail below tail_target (absolute), capped at N - 2."""
    s2 = math.sin(0.5 * u) ** 2
    if tail_target <= 0.0 or s2 == 0.0:
        return N - 2
    needed = math.sqrt(1.0 / (2.0 * tail_target * s2))
    return max(1, min(N - 2, int(math.ceil(needed))))


def log_kernel_closed(
    N: int,
    x: float,
    y: float,
    K: int | None = None,
    eps_sing: float = EPS_SING,
    tail_target: float = 1e-9,
) -> KernelEvaluation:
    """
    Closed-form F_N(x, y) with the 15-term breakdown.

    Refuses points within ``eps_sing`` of the singular tubes x = 0, y = 0,
    x + y = 0, x - y = 0 (mod 2*pi); callers should fall back to
    log_kernel_direct there.  Arguments with x - y or x + y *exactly* zero are
    allowed: the terms have removable limits on the diagonals and the full
    (untruncated) sums are used.

    ``K`` caps both telescoped sums; ``K=None`` picks per-argument caps with
    certified tail below ``tail_target``.  The certified truncation error of
    ``value`` (on the F_N scale) is returned as ``truncation_bound``.
    """
    if N < 3:
        raise ValueError(f"closed form needs N >= 3, got {N}")
    if K is not None and not 1 <= K <= N - 2:
        raise ValueError(f"truncation cap must satisfy 1 <= K <= N - 2, got {K}")
    for name, v in (("x", x), ("y", y)):
        if _tube_distance(v) < eps_sing:
            raise SingularTubeError(f"{name} = {v!r} within {eps_sing} of a singular tube")
    for name, v in (("x+y", x + y), ("x-y", x - y)):
        # only exact zero takes the removable-limit branch; anything else
        # near a tube (including exact nonzero multiples of 2*pi) is refused
        if v != 0.0 and _tube_distance(v) < eps_sing:
            raise SingularTubeError(f"{name} = {v!r} within {eps_sing} of a singular tube")

    rate = N + 0.5
    sx, cx = math.sin(rate * x), math.cos(rate * x)
    sy, cy = math.sin(rate * y), math.cos(rate * y)
    dx, dy = 2.0 * math.sin(0.5 * x), 2.0 * math.sin(0.5 * y)
    denom = dx * dy
    SS, CC = sx * sy / denom, cx * cy / denom
    SC, CS = sx * cy / denom, cx * sy / denom

    Tp, Vp, Wp, Sp, tb_p, _ = _sum_pair_values(N, x + y, K, tail_target)
    Tm, Vm, Wm, Sm, tb_m, _ = _sum_pair_values(N, x - y, K, tail_target)

    terms = np.array(
        [
            0.5 * SS * Tp,            # R1
            0.5 * SS * Tm,            # R2
            0.5 * CC * Tm,            # R3
            -0.5 * CC * Tp,           # R4
            0.5 * SS * Vp,            # R5
            0.5 * SS * Wp,            # R6
            -0.75 * SS,               # R7
            0.5 * SS * Vm,            # R8
            0.5 * SS * Wm,            # R9
            0.5 * CC * Vm,            # R10
            0.5 * CC * Wm,            # R11
            -0.5 * CC * Vp,           # R12
            -0.5 * CC * Wp,           # R13
            -0.5 * SC * (Sp - Sm),    # R14
            -0.5 * CS * (Sp + Sm),    # R15
        ]
    )
    H = harmonic_number(N)
    bound = 0.5 * (abs(SS) + abs(CC)) * (tb_p + tb_m) / H
    return KernelEvaluation(value=float(np.sum(terms)) / H, terms=terms, truncation_bound=bound)


def _closed_terms_batch(N: int, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """
    Exact (full-K) 15-term breakdown at many points, shape (P, 15), on the
    H_N * F_N scale.  Points must avoid x = 0 and y = 0 mod 2*pi; the
    diagonal combinations are handled by their removable limits.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    rate = N + 0.5
    sx, cx = np.sin(rate * xs), np.cos(rate * xs)
    sy, cy = np.sin(rate * ys), np.cos(rate * ys)
    denom = 4.0 * np.sin(0.5 * xs) * np.sin(0.5 * ys)
    SS, CC = sx * sy / denom, cx * cy / denom
    SC, CS = sx * cy / denom, cx * sy / denom

    k = np.arange(1.0, N - 1.0)
    w = _telescoped_weights(k)
    limit_T = float(np.sum(w * 0.5 * (k + 1.0) ** 2))

    def sums(u: np.ndarray):
        half = np.sin(0.5 * u)
        zero = half == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            T = (np.sin(0.5 * np.outer(u, k + 1.0)) ** 2 @ w) / (2.0 * half ** 2)
            V = np.sin(0.5 * N * u) ** 2 / (2.0 * half ** 2) / (N * (N - 1.0))
            W = np.sin((N + 0.5) * u) / (2.0 * half) / N
        T = np.where(zero, limit_T, T)
        V = np.where(zero, N / (2.0 * (N - 1.0)), V)
        W = np.where(zero, (N + 0.5) / N, W)
        S = sin_sum(N, u)
        return T, V, W, np.asarray(S)

    Tp, Vp, Wp, Sp = sums(xs + ys)
    Tm, Vm, Wm, Sm = sums(xs - ys)

    cols = [
        0.5 * SS * Tp,
        0.5 * SS * Tm,
        0.5 * CC * Tm,
        -0.5 * CC * Tp,
        0.5 * SS * Vp,
        0.5 * SS * Wp,
        -0.75 * SS,
        0.5 * SS * Vm,
        0.5 * SS * Wm,
        0.5 * CC * Vm,
        0.5 * CC * Wm,
        -0.5 * CC * Vp,
        -0.5 * CC * Wp,
        -0.5 * SC * (Sp - Sm),
        -0.5 * CS * (Sp + Sm),
    ]
    return np.column_stack(cols)


# ----------------------------------------------------------------------------
# phase geometry checks
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseCheck:
    sin_val: float
    cos_val: float
    ok: bool


#: Slack for the closed phase-window boundaries (cos hits exactly 1/4 and 0 there).
PHASE_BOUNDARY_TOL = 1e-12


def phase_range_check(n: int, x: float) -> PhaseCheck:
    """
    Verify the phase bounds that drive the kernel lower bound: for x inside
    some window [alpha(m, n), beta(m, n)] the phase (2^{2n}+1/2) x lies in
    [arccos(1/4), pi/2] mod 2*pi, hence sin > 1/2 and cos <= 1/4 (with
    equality exactly on the window boundaries; a 1e-12 slack absorbs the
    boundary roundoff).
    """
    rate = phase_rate(n)
    phase = rate * x
    m_guess = int(math.floor((phase - ARCCOS_QUARTER) / (2.0 * math.pi)))
    tol = 1e-12 * max(1.0, abs(phase))
    member = False
    for m in (m_guess - 1, m_guess, m_guess + 1):
        if m < 0:
            continue
        if alpha(m, n) - tol <= x <= beta(m, n) + tol:
            member = True
            break
    if not member:
        raise RegionMembershipError(f"x = {x!r} lies in no phase window at scale {n}")
    sv, cv = math.sin(phase), math.cos(phase)
    ok = sv > 0.5 - PHASE_BOUNDARY_TOL and cv <= 0.25 + PHASE_BOUNDARY_TOL
    return PhaseCheck(sin_val=sv, cos_val=cv, ok=ok)


# ----------------------------------------------------------------------------
# kernel lower-bound survey
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaReport:
    """
    Survey of the kernel lower bound at scale n (N = 2^{2n}).

    ``i_min_ratio`` is the minimum of x y F_N(x, y) over the stratified
    I-region sample; ``j_min_ratio`` additionally minimizes F over the four
    corner offsets (s, t) in {0, gamma(n)}^2 before multiplying by x y.
    ``main_min_over_n`` / ``remainder_max`` track the split into the four
    telescoped main terms (scaled by 1/n) and the absolute remainder sum,
    both on the H_N F_N scale.
    """

    n: int
    samples_per_rect: int
    i_samples: int
    i_min_ratio: float
    i_argmin: tuple[float, float]
    j_samples: int
    j_min_ratio: float
    j_argmin: tuple[float, float]
    main_min_over_n: float
    remainder_max: float

    def csv_rows(self) -> list[list]:
        return [
            [self.n, REGION_I, self.i_min_ratio, self.i_argmin[0], self.i_argmin[1], self.i_samples],
            [self.n, REGION_J, self.j_min_ratio, self.j_argmin[0], self.j_argmin[1], self.j_samples],
        ]


def lemma_main_check(n: int, samples_per_rect: int = 9) -> LemmaReport:
    """
    Evaluate r(x, y) = x y F_{2^{2n}}(x, y) on a stratified sample of the
    I-region (direct kernel form) and report the minimum, together with the
    corner-offset minimum over the J-region and the main/remainder split of
    the closed form.  Deterministic: fixed sample lattice, fixed reductions.
    """
    N = 4 ** n
    region_i = build_region(n, REGION_I)  # EmptyRegionError below scale 3
    pts = stratified_samples(region_i, samples_per_rect)
    xs, ys = pts[:, 0], pts[:, 1]

    f_vals = log_kernel_direct_many(N, xs, ys)
    ratios = xs * ys * f_vals
    i_arg = int(np.argmin(ratios))

    terms = _closed_terms_batch(N, xs, ys)
    main = np.sum(terms[:, :4], axis=1)
    remainder = np.sum(np.abs(terms[:, 4:]), axis=1)
    main_min_over_n = float(np.min(xs * ys * main / n))
    remainder_max = float(np.max(xs * ys * remainder))

    region_j = build_region(n, REGION_J)
    jpts = stratified_samples(region_j, samples_per_rect)
    jx, jy = jpts[:, 0], jpts[:, 1]
    g = gamma(n)
    offset_min = None
    for s_off in (0.0, g):
        for t_off in (0.0, g):
            vals = log_kernel_direct_many(N, jx - s_off, jy - t_off)
            offset_min = vals if offset_min is None else np.minimum(offset_min, vals)
    j_ratios = jx * jy * offset_min
    j_arg = int(np.argmin(j_ratios))

    return LemmaReport(
        n=n,
        samples_per_rect=samples_per_rect,
        i_samples=len(xs),
        i_min_ratio=float(ratios[i_arg]),
        i_argmin=(float(xs[i_arg]), float(ys[i_arg])),
        j_samples=len(jx),
        j_min_ratio=float(j_ratios[j_arg]),
        j_argmin=(float(jx[j_arg]), float(jy[j_arg])),
        main_min_over_n=main_min_over_n,
        remainder_max=remainder_max,
    )
