"""Spherical means of radial functions and the maximal operator over a dilation set.

For radial ``f(x) = f_0(|x|)`` the mean over the sphere of radius ``t``
centred at ``x`` (``r = |x|``) is a one-dimensional integral

    A_t f(r) = c_d ∫_{|r-t|}^{r+t} K_t(r, s) f_0(s) ds

with the explicit kernel of :func:`kernel_value`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import beta as beta_fn

from . import dyadic
from .dyadic import DilationSet, pow2
from .profiles import Piece, RadialProfile
from .quadrature import QuadratureError, QuadratureSpec, kernels

DEFAULT_QUAD = QuadratureSpec()


def kernel_value(r: float, s: float, t: float, d: int) -> float:
    """``K_t(r, s)`` on the open interval ``|r - t| < s < r + t``."""
    if not abs(r - t) < s < r + t:
        raise ValueError(f"s={s} outside the open interval ({abs(r - t)}, {r + t})")
    if d < 2:
        raise ValueError("dimension must be at least 2")
    den = (r + t) ** 2 - (r - t) ** 2
    base = s / den
    if d == 3:
        return base
    bracket = math.sqrt((r + t) ** 2 - s * s) * math.sqrt(s * s - (r - t) ** 2) / den
    return bracket ** (d - 3) * base


def normalization_constant(d: int) -> float:
    """``c_d`` fixed by ``A_t 1 = 1``; equals ``2 / B((d-1)/2, (d-1)/2)``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if d == 3:
        return 2.0
    if d == 2:
        return 2.0 / math.pi
    return 2.0 / beta_fn((d - 1) / 2, (d - 1) / 2)


@dataclass(frozen=True)
class MeanResult:
    value: float
    err_bound: float
    n_panels: int


def spherical_mean_result(f: RadialProfile, r: float, t: float, d: int,
                          quad: QuadratureSpec = DEFAULT_QUAD) -> MeanResult:
    if r <= 0 or t <= 0:
        raise ValueError("r and t must be positive")
    supp = f.support
    if supp is None or supp[1] <= abs(r - t) or supp[0] >= r + t:
        return MeanResult(0.0, 0.0, 0)
    xg, wg = quad.rule
    lo, hi, kind, beta, coef = _arrays(f)
    val, err, n, ok = kernels.spherical_mean_raw(float(r), float(t), int(d), normalization_constant(d),
                                                 lo, hi, kind, beta, coef, xg, wg, quad.tol, quad.max_depth)
    if not ok:
        raise QuadratureError(f"spherical mean did not converge at r={r}, t={t}", val, err)
    return MeanResult(val, err, n)


def spherical_mean(f: RadialProfile, r: float, t: float, d: int,
                   quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    return spherical_mean_result(f, r, t, d, quad).value


def spherical_mean_closed_form_d3(f: RadialProfile, r: float, t: float) -> float:
    """Exact ``A_t f(r)`` in three dimensions: ``(1 / 2rt) ∫ s f_0(s) ds``."""
    return f.integral(1.0, abs(r - t), r + t) / (2.0 * r * t)


_ARRAY_CACHE: dict[int, tuple] = {}


def _arrays(f: RadialProfile):
    key = id(f)
    hit = _ARRAY_CACHE.get(key)
    if hit is not None and hit[0] is f:
        return hit[1]
    arrs = f.arrays()
    if len(_ARRAY_CACHE) > 256:
        _ARRAY_CACHE.clear()
    _ARRAY_CACHE[key] = (f, arrs)
    return arrs


# ----------------------------------------------------------------------------
# sampling the dilation set
# ----------------------------------------------------------------------------

def t_samples(E: DilationSet, levels: int) -> np.ndarray:
    """Isolated points of ``E`` plus, inside each interval, its endpoints and
    the multiples of ``2^{k - levels}`` in every block ``I_k`` it crosses.

    Raising ``levels`` by one returns a superset.
    """
    cache = E.__dict__.setdefault("_t_sample_cache", {})
    if levels in cache:
        return cache[levels]
    vals: set[Fraction] = set(E.points)
    for a, b in E.intervals:
        vals.add(a)
        vals.add(b)
        k = dyadic.floor_log2(a)
        while pow2(k) <= b:
            h = pow2(k - levels)
            lo, hi = max(a, pow2(k)), min(b, pow2(k + 1))
            j = math.ceil(lo / h)
            x = j * h
            while x <= hi:
                vals.add(x)
                j += 1
                x = j * h
            k += 1
    out = np.array(sorted(float(v) for v in vals))
    cache[levels] = out
    return out


@dataclass(frozen=True)
class MaximalResult:
    value: float
    n_samples: int
    argmax: float | None
    err_bound: float


def maximal_function_result(f: RadialProfile, E: DilationSet, r: float, d: int,
                            quad: QuadratureSpec = DEFAULT_QUAD, t_levels: int = 6) -> MaximalResult:
    """Sampled ``sup_{t in E} |A_t f(r)|``: a certified lower bound of the true supremum."""
    ts = t_samples(E, t_levels)
    supp = f.support
    if supp is None or len(ts) == 0:
        return MaximalResult(0.0, len(ts), None, 0.0)
    # A_t f(r) vanishes unless [|r-t|, r+t] meets the support
    lo_t = max(supp[0] - r, r - supp[1], 0.0)
    hi_t = supp[1] + r
    i0 = int(np.searchsorted(ts, lo_t, side="left"))
    i1 = int(np.searchsorted(ts, hi_t, side="right"))
    best, arg, err = 0.0, None, 0.0
    for t in ts[i0:i1]:
        res = spherical_mean_result(f, r, float(t), d, quad)
        if abs(res.value) > best:
            best, arg, err = abs(res.value), float(t), res.err_bound
    return MaximalResult(best, len(ts), arg, err)


def maximal_function(f: RadialProfile, E: DilationSet, r: float, d: int,
                     quad: QuadratureSpec = DEFAULT_QUAD, t_levels: int = 6) -> float:
    return maximal_function_result(f, E, r, d, quad, t_levels).value


def lemma27_lower_bound(f: RadialProfile, k: int, n: int, d: int) -> float:
    """``2^{-k(d-1)} ∫_{2^{k-n+2}}^{2^k} s^{d-2} f_0(s) ds`` (the constant is left out)."""
    if n < 3:
        raise ValueError("need n >= 3 for a nonempty integration range")
    if not f.is_nonnegative:
        raise ValueError("the lower bound needs a nonnegative profile")
    return 2.0 ** (-k * (d - 1)) * f.integral(d - 2, 2.0 ** (k - n + 2), 2.0 ** k)


def shell_radii(E: DilationSet, k: int, n: int, per_component: int = 3, max_points: int = 12) -> list[float]:
    """Interior sample radii of ``D_n^k`` spread over its components."""
    comps = dyadic.shell_components(E, k, n)
    if not comps:
        return []
    step = max(1, math.ceil(len(comps) * per_component / max_points))
    out = []
    for a, b in comps[::step]:
        for i in range(1, per_component + 1):
            out.append(float(a + (b - a) * Fraction(i, per_component + 1)))
    return out


def lower_bound_ratio(f: RadialProfile, E: DilationSet, k: int, n: int, d: int,
                      quad: QuadratureSpec = DEFAULT_QUAD, t_levels: int = 6) -> float | None:
    """``min_r 𝓜_E f(r) / lemma27_lower_bound`` over sample radii of ``D_n^k`` (None if undefined)."""
    lb = lemma27_lower_bound(f, k, n, d)
    rs = shell_radii(E, k, n)
    if lb <= 0 or not rs:
        return None
    return min(maximal_function(f, E, r, d, quad, t_levels) for r in rs) / lb


# ----------------------------------------------------------------------------
# extremal test functions
# ----------------------------------------------------------------------------

def witness_block(p: float, d: int, j: int) -> RadialProfile:
    """``s^{-d/p}`` on ``[2^j, 2^{j+1}]``; its ``L^p(μ_d)`` norm is ``(log 2)^{1/p}`` for every ``j``."""
    if p < 1:
        raise ValueError("witness_block needs p >= 1")
    return RadialProfile((Piece(2.0 ** j, 2.0 ** (j + 1), "power", -d / p, 1.0),),
                         f"witness-block(p={p},d={d},j={j})")


def witness_tent(d: int, a: int, L: int) -> RadialProfile:
    """``s^{1-d}`` on ``[2^{a-10L}, 2^{a+10L}]``; its ``L^{p_d}(μ_d)`` norm is ``(20 L log 2)^{(d-1)/d}``."""
    if L < 1:
        raise ValueError("L must be a positive integer")
    return RadialProfile((Piece(2.0 ** (a - 10 * L), 2.0 ** (a + 10 * L), "power", 1.0 - d, 1.0),),
                         f"witness-tent(d={d},a={a},L={L})")


def divergent_profile(d: int) -> RadialProfile:
    """``s^{-(d-1)} / log(1/s)`` on ``(0, 1/2]``: in ``L^{p_d}`` but with infinite means at ``r = t``."""
    return RadialProfile((Piece(0.0, 0.5, "powerlog", -(d - 1.0), 1.0),), f"log-divergent(d={d})")


def pd(d: int) -> float:
    return d / (d - 1)
