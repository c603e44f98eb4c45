"""Majorant operators dominating the spherical maximal function on radial functions.

Three dimensions and up: ``𝓜_E f <= C (𝔐g + R_1 f_0 + R_2 f_0)`` with
``g = f_0 s^{(d-1)/p}``.  Two dimensions: ``𝔐g + 𝔐~g + R_1..R_4`` with the
inverse square-root weights integrated after the substitution
``s = c ± u^2``.  Also the shell operators ``𝔐_ℓ`` and ``𝔑`` that are
localized to the sets ``D_n^k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import dyadic
from .dyadic import DilationSet
from .lorentz import inv_dual
from .profiles import Piece, RadialProfile
from .quadrature import QuadratureError, QuadratureSpec, kernels
from .spherical import DEFAULT_QUAD, _arrays, maximal_function_result, t_samples

GRID_DENSITY = 32      # geometric t-grid points per octave for continuous sups
GRID_OCTAVES = 24      # window endpoints r ± t lose relative accuracy ~ 2^-52 r/t


@dataclass(frozen=True)
class MajorantSample:
    r: float
    value: float
    operator: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.value < 0:
            raise ValueError("majorant values are nonnegative")


def g_transform(f: RadialProfile, p: float, d: int) -> RadialProfile:
    """``g(s) = f_0(s) s^{(d-1)/p}``, so that ``||g||_{L^p(ds)} = ||f_0||_{L^p(μ_d)}``."""
    if not 1 <= p < 2:
        raise ValueError("g_transform needs 1 <= p < 2")
    return f.times_power((d - 1) / p)


def _check_nonneg(f: RadialProfile):
    if not f.is_nonnegative:
        raise ValueError("majorants are evaluated on nonnegative profiles")


def _e_samples(E: DilationSet, lo: float, hi: float, t_levels: int, lo_open=True, hi_open=True) -> np.ndarray:
    ts = t_samples(E, t_levels)
    mask = (ts > lo) if lo_open else (ts >= lo)
    mask &= (ts < hi) if hi_open else (ts <= hi)
    return ts[mask]


# ----------------------------------------------------------------------------
# local and far averages (d >= 3)
# ----------------------------------------------------------------------------

def _geometric(top: float, octaves: int = GRID_OCTAVES, density: int = GRID_DENSITY) -> np.ndarray:
    return top * 2.0 ** (-np.arange(octaves * density + 1) / density)


def op_R1_near(f: RadialProfile, r: float, d: int = 3, restrict_to_E: DilationSet | None = None,
               t_levels: int = 6) -> float:
    """``sup_{t <= r/2} (1/t) ∫_{r-t}^{r+t} f_0``.

    The unrestricted sup is taken over a geometric grid together with every
    ``t`` at which a window edge crosses a breakpoint of ``f_0``; for
    piecewise-constant profiles that candidate set contains the maximizer.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    _check_nonneg(f)
    if f.is_zero:
        return 0.0
    if restrict_to_E is not None:
        cands = _e_samples(restrict_to_E, 0.0, r / 2, t_levels, hi_open=False)
    else:
        bps = [abs(r - b) for b in f.breakpoints() if 0 < abs(r - b) <= r / 2]
        cands = np.concatenate([_geometric(r / 2), np.array(bps, dtype=float)])
    best = 0.0
    for t in cands:
        v = f.integral(0.0, r - t, r + t) / t
        if v > best:
            best = v
    return best


def op_R2_far(f: RadialProfile, r: float, restrict_to_E: DilationSet | None = None,
              t_levels: int = 6) -> float:
    """``sup_{t >= 3r/2} (1/r) ∫_{t-r}^{t+r} f_0``."""
    if not r > 0:
        raise ValueError("r must be positive")
    _check_nonneg(f)
    supp = f.support
    if supp is None or supp[1] <= r / 2:
        return 0.0
    t_max = supp[1] + r
    if restrict_to_E is not None:
        cands = _e_samples(restrict_to_E, 1.5 * r, t_max, t_levels, lo_open=False, hi_open=False)
    else:
        bps = [b + e for b in f.breakpoints() for e in (-r, r) if 1.5 * r <= b + e <= t_max]
        n = max(2, int(GRID_DENSITY * math.log2(t_max / (1.5 * r))) + 2) if t_max > 1.5 * r else 1
        grid = np.geomspace(1.5 * r, max(t_max, 1.5 * r), n)
        cands = np.concatenate([grid, np.array(bps, dtype=float)])
    best = 0.0
    for t in cands:
        v = f.integral(0.0, t - r, t + r) / r
        if v > best:
            best = v
    return best


def frak_exponent(p: float, d: int, exponent: str = "dual") -> float:
    """Power of ``s`` multiplying ``g`` inside ``𝔐``: ``(d-1)/p' - 1`` or the printed ``(d-1)/p - 1``."""
    if exponent == "dual":
        return (d - 1) * inv_dual(p) - 1.0
    if exponent == "printed":
        return (d - 1) / p - 1.0
    raise ValueError("exponent must be 'dual' or 'printed'")


def op_frakM(g: RadialProfile, E: DilationSet, r: float, p: float, d: int,
             t_levels: int = 6, exponent: str = "dual") -> float:
    """``sup_{t in E, r/2 < t < 3r/2} r^{1-d} ∫_{|r-t|}^{r+t} s^γ g(s) ds``."""
    if d < 3:
        raise ValueError("op_frakM is the d >= 3 operator; use op_2d_frakM")
    if not 1 <= p < d / (d - 1):
        raise ValueError("need 1 <= p < d/(d-1)")
    _check_nonneg(g)
    if g.is_zero:
        return 0.0
    gam = frak_exponent(p, d, exponent)
    best = 0.0
    for t in _e_samples(E, r / 2, 1.5 * r, t_levels):
        v = g.integral(gam, abs(r - t), r + t)
        if v > best:
            best = v
    return r ** (1 - d) * best


def _shell_cells(E: DilationSet, r: float) -> list[tuple[int, int]]:
    """All ``(k, n)`` with ``r in D_n^k`` (two blocks share the point ``2^k``)."""
    k = dyadic.floor_log2(dyadic.as_fraction(r))
    out = []
    for kk in (k - 1, k):
        n = dyadic.shell_index(E, kk, r)
        if n is not None:
            out.append((kk, n))
    return out


def op_frakM_ell(g: RadialProfile, E: DilationSet, r: float, ell: int, p: float, d: int) -> float:
    """``Σ χ_{D_n^k}(r) r^{1-d} ∫_{2^{k-n+ℓ}}^{2^{k-n+ℓ+1}} s^{(d-1)/p'-1} g`` over ``n >= ℓ-3``."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    _check_nonneg(g)
    gam = (d - 1) * inv_dual(p) - 1.0
    total = 0.0
    for k, n in _shell_cells(E, r):
        if n >= ell - 3:
            lo = 2.0 ** (k - n + ell)
            total += g.integral(gam, lo, 2 * lo)
    return r ** (1 - d) * total


def op_frakN(g: RadialProfile, E: DilationSet, r: float, p: float, lam: float) -> float:
    """``Σ χ_{D_n^k}(r) 2^{-k(λ-1)} ∫_{2^{k-n}}^{2^{k+1}} s^{-1/p'} g``."""
    if not 1 < p < math.inf:
        raise ValueError("need 1 < p < inf")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    _check_nonneg(g)
    total = 0.0
    for k, n in _shell_cells(E, r):
        total += 2.0 ** (-k * (lam - 1)) * g.integral(-inv_dual(p), 2.0 ** (k - n), 2.0 ** (k + 1))
    return total


# ----------------------------------------------------------------------------
# two dimensions
# ----------------------------------------------------------------------------

def singular_average(f: RadialProfile, c: float, a: float, b: float, side: int, gamma: float = 0.0,
                     quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``∫_a^b s^γ |s - c|^{-1/2} f_0(s) ds`` with the singular point ``c`` at ``a`` (side +1) or ``b`` (side -1)."""
    supp = f.support
    if supp is None or b <= a or supp[1] <= a or supp[0] >= b:
        return 0.0
    xg, wg = quad.rule
    lo, hi, kind, beta, coef = _arrays(f)
    val, err, _, ok = kernels.singular_integral_raw(float(c), float(a), float(b), int(side), float(gamma),
                                                   lo, hi, kind, beta, coef, xg, wg, quad.tol, quad.max_depth)
    if not ok:
        raise QuadratureError(f"singular integral did not converge on [{a}, {b}]", val, err)
    return val


def op_2d_singular(i: int, f: RadialProfile, E: DilationSet, r: float, t_levels: int = 6,
                   quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """The local (``i = 1, 2``, ``t <= r/2``) and far (``i = 3, 4``, ``t >= 3r/2``) singular averages."""
    if i not in (1, 2, 3, 4):
        raise ValueError("i must be 1, 2, 3 or 4")
    _check_nonneg(f)
    if f.is_zero:
        return 0.0
    if i <= 2:
        ts = _e_samples(E, 0.0, r / 2, t_levels, hi_open=False)
    else:
        ts = _e_samples(E, 1.5 * r, math.inf, t_levels, lo_open=False)
    best = 0.0
    for t in ts:
        t = float(t)
        if i == 1:
            v = t ** -0.5 * singular_average(f, r - t, r - t, r, +1, 0.0, quad)
        elif i == 2:
            v = t ** -0.5 * singular_average(f, r + t, r, r + t, -1, 0.0, quad)
        elif i == 3:
            v = r ** -0.5 * singular_average(f, t - r, t - r, t, +1, 0.0, quad)
        else:
            v = r ** -0.5 * singular_average(f, t + r, t, t + r, -1, 0.0, quad)
        best = max(best, v)
    return best


def op_2d_frakM(variant: str, g: RadialProfile, E: DilationSet, r: float, p: float,
                t_levels: int = 6, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``sup_{t in E, r/2 < t < 3r/2} r^{-1} ∫ s^{1/2-1/p} w(s) g(s) ds``.

    ``plain``: ``w = (s - |r-t|)^{-1/2}`` on ``[|r-t|, r+t]``;
    ``tilde``: ``w = (r+t-s)^{-1/2}`` on the same range;
    ``zero``:  the plain weight restricted to ``[|r-t|, 2|r-t|]``.
    """
    if variant not in ("plain", "tilde", "zero"):
        raise ValueError("variant must be plain, tilde or zero")
    if not 1 <= p < 2:
        raise ValueError("need 1 <= p < 2")
    _check_nonneg(g)
    if g.is_zero:
        return 0.0
    gam = 0.5 - 1.0 / p
    best = 0.0
    for t in _e_samples(E, r / 2, 1.5 * r, t_levels):
        t = float(t)
        A, B = abs(r - t), r + t
        if variant == "plain":
            v = singular_average(g, A, A, B, +1, gam, quad)
        elif variant == "tilde":
            v = singular_average(g, B, A, B, -1, gam, quad)
        else:
            v = singular_average(g, A, A, min(2 * A, B), +1, gam, quad)
        best = max(best, v)
    return best / r


# ----------------------------------------------------------------------------
# domination
# ----------------------------------------------------------------------------

def majorant_terms(f: RadialProfile, E: DilationSet, r: float, d: int, p: float,
                   t_levels: int = 6, quad: QuadratureSpec = DEFAULT_QUAD,
                   exponent: str = "dual") -> dict[str, float]:
    """Every term on the right of the pointwise domination, keyed by operator name."""
    g = f.times_power((d - 1) / p)
    if d >= 3:
        return {
            "frakM": op_frakM(g, E, r, p, d, t_levels, exponent),
            "R1": op_R1_near(f, r, d),
            "R2": op_R2_far(f, r),
        }
    if d != 2:
        raise ValueError("dimension must be at least 2")
    return {
        "frakM": op_2d_frakM("plain", g, E, r, p, t_levels, quad),
        "frakM_tilde": op_2d_frakM("tilde", g, E, r, p, t_levels, quad),
        **{f"R{i}": op_2d_singular(i, f, E, r, t_levels, quad) for i in (1, 2, 3, 4)},
    }


@dataclass
class DominationReport:
    d: int
    p: float
    t_levels: int
    r: list[float]
    maximal: list[float]
    majorant: list[float]
    ratios: list[float | None]
    counterexamples: list[float]
    terms: list[dict[str, float]]

    @property
    def sup_ratio(self) -> float:
        vals = [x for x in self.ratios if x is not None]
        return max(vals) if vals else 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples and math.isfinite(self.sup_ratio)

    def rows(self) -> Iterable[tuple]:
        for r, m, s, q in zip(self.r, self.maximal, self.majorant, self.ratios):
            yield r, m, s, q


def domination_check(f: RadialProfile, E: DilationSet, d: int, p: float, r_grid: Sequence[float],
                     t_levels: int = 6, quad: QuadratureSpec = DEFAULT_QUAD,
                     exponent: str = "dual") -> DominationReport:
    """Ratio ``𝓜_E f(r) / Σ majorants(r)`` on a grid; ``0/0`` points are skipped."""
    _check_nonneg(f)
    rs, mx, mj, ratios, bad, terms = [], [], [], [], [], []
    for r in r_grid:
        r = float(r)
        m = maximal_function_result(f, E, r, d, quad, t_levels).value
        parts = majorant_terms(f, E, r, d, p, t_levels, quad, exponent)
        s = math.fsum(parts.values())
        rs.append(r)
        mx.append(m)
        mj.append(s)
        terms.append(parts)
        if s > 0:
            ratios.append(m / s)
        elif m > 1e-12:
            ratios.append(math.inf)
            bad.append(r)
        else:
            ratios.append(None)
    return DominationReport(d, p, t_levels, rs, mx, mj, ratios, bad, terms)


def r1_weak_type_observable(eps: float, alphas: Sequence[float], d: int = 3,
                            n_grid: int = 4096) -> list[float]:
    """``α μ_d{R_1 f_0 > α}`` for ``f_0 = χ_{[1, 1+ε]} / ε`` (unit ``L^1(ds)`` mass).

    ``R_1 f_0`` vanishes outside ``[2/3, 2+2ε]``; the super-level measure is
    read off a fine grid that is uniform in ``log |r - 1|`` on each side.
    """
    f = RadialProfile((Piece(1.0, 1.0 + eps, "constant", 0.0, 1.0 / eps),), f"spike({eps})")
    left = 1.0 - np.geomspace(1.0 / 3.0, 1e-9, n_grid)
    right = 1.0 + eps + np.geomspace(1e-9, 1.0 + eps, n_grid)
    mid = np.linspace(1.0, 1.0 + eps, 64)
    pts = np.unique(np.concatenate([left, mid, right]))
    vals = np.array([op_R1_near(f, float(r), d) for r in pts])
    out = []
    for a in alphas:
        # a cell counts when both endpoints exceed α: a lower estimate of the measure
        inside = (vals[1:] > a) & (vals[:-1] > a)
        mass = np.sum((pts[1:][inside] ** d - pts[:-1][inside] ** d) / d)
        out.append(float(a * mass))
    return out
