"""Distribution functions, rearrangements and Lorentz quasinorms.

Three formulas for ``||f||_{L^{p,q}}`` are implemented on separate code
paths so that their agreement is a genuine check:

* ``rearranged``:   ``((q/p) ∫ [t^{1/p} f*(t)]^q dt/t)^{1/q}``
* ``distribution``: ``(q ∫ [α λ_f(α)^{1/p}]^q dα/α)^{1/q}``
* ``dyadic``:       ``(Σ_σ [2^σ λ_f(2^σ)^{1/p}]^q)^{1/q}``

The first two are equal; the third is comparable within a factor 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from scipy.optimize import brentq

from .profiles import INF, Piece, RadialProfile

FORMS = ("rearranged", "distribution", "dyadic")


@dataclass(frozen=True)
class LorentzParams:
    p: float
    q: float
    lam: float = 3.0
    d: int = 3

    def __post_init__(self):
        if not self.p >= 1 or math.isinf(self.p):
            raise ValueError("need 1 <= p < inf")
        if not self.q >= 1:
            raise ValueError("need q >= 1 (q = inf allowed)")
        if not self.lam > 0:
            raise ValueError("measure exponent must be positive")
        if self.d < 2:
            raise ValueError("dimension must be at least 2")

    @property
    def p_prime(self) -> float:
        return dual_exponent(self.p)

    @property
    def p_d(self) -> float:
        return self.d / (self.d - 1)


def dual_exponent(p: float) -> float:
    """``p' = p / (p - 1)``; ``inf`` at ``p = 1``."""
    if p < 1:
        raise ValueError("need p >= 1")
    return INF if p == 1 else p / (p - 1)


def inv_dual(p: float) -> float:
    """``1/p'``, exactly ``0`` at ``p = 1``."""
    return 1.0 - 1.0 / p


@dataclass(frozen=True)
class SimpleFunction:
    """``Σ a_j χ_{E_j}`` with disjoint ``E_j``; levels descend, masses positive."""

    levels: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self):
        lv = tuple(float(a) for a in self.levels)
        ms = tuple(float(m) for m in self.masses)
        if len(lv) != len(ms):
            raise ValueError("levels and masses differ in length")
        if any(a <= 0 for a in lv):
            raise ValueError("levels must be strictly positive")
        if any(a < b for a, b in zip(lv, lv[1:])):
            raise ValueError("levels must be sorted in descending order")
        if any(not m > 0 for m in ms):
            raise ValueError("masses must be strictly positive")
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "masses", ms)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "SimpleFunction":
        """Build from unsorted ``(level, mass)`` pairs; equal levels are merged, zeros dropped."""
        acc: dict[float, float] = {}
        for a, m in pairs:
            a, m = abs(float(a)), float(m)
            if a > 0 and m > 0:
                acc[a] = acc.get(a, 0.0) + m
        items = sorted(acc.items(), reverse=True)
        return cls(tuple(a for a, _ in items), tuple(m for _, m in items))

    def to_json(self) -> list[list[float]]:
        return [[a, m] for a, m in zip(self.levels, self.masses)]

    @classmethod
    def from_json(cls, data) -> "SimpleFunction":
        return cls.from_pairs(data)

    @property
    def cumulative(self) -> list[float]:
        """``v_j = Σ_{k<=j} μ(E_k)``."""
        out, acc = [], 0.0
        for m in self.masses:
            acc += m
            out.append(acc)
        return out

    def scaled(self, c: float) -> "SimpleFunction":
        return SimpleFunction.from_pairs([(a * c, m) for a, m in zip(self.levels, self.masses)])

    def __len__(self) -> int:
        return len(self.levels)


Function = Union[SimpleFunction, RadialProfile]


def profile_to_simple(f: RadialProfile, lam: float) -> SimpleFunction:
    """Exact conversion of a piecewise-constant profile under ``μ_lam``."""
    if not f.is_piecewise_constant:
        raise ValueError("only piecewise-constant profiles convert to simple functions")
    pairs = []
    for pc in f.pieces:
        mass = (pc.hi ** lam - pc.lo ** lam) / lam
        if math.isinf(mass) and pc.coef != 0:
            raise ValueError("piece of infinite measure")
        pairs.append((pc.coef, mass))
    return SimpleFunction.from_pairs(pairs)


# ----------------------------------------------------------------------------
# distribution function and rearrangement
# ----------------------------------------------------------------------------

def _mu(a: float, b: float, lam: float) -> float:
    if b <= a:
        return 0.0
    return (b ** lam - a ** lam) / lam


def _piece_superlevel(pc: Piece, alpha: float, lam: float) -> float:
    c = abs(pc.coef)
    if c == 0:
        return 0.0
    if pc.kind == "constant" or pc.beta == 0 and pc.kind == "power":
        return _mu(pc.lo, pc.hi, lam) if c > alpha else 0.0
    if pc.kind == "power":
        root = (alpha / c) ** (1.0 / pc.beta)
        if pc.beta > 0:
            return _mu(max(pc.lo, root), pc.hi, lam)
        return _mu(pc.lo, min(pc.hi, root), lam)
    # c s^β / log(1/s): log-value g(s) = β log s - log log(1/s) has its only
    # critical point where log(1/s) = -1/β
    g = lambda s: math.log(c) + pc.beta * math.log(s) - math.log(-math.log(s)) - math.log(alpha)
    cuts = [pc.lo, pc.hi]
    if pc.beta < 0:
        crit = math.exp(1.0 / pc.beta)
        if pc.lo < crit < pc.hi:
            cuts.insert(1, crit)
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        ga = g(a) if a > 0 else (INF if pc.beta < 0 else -INF)
        gb = g(b)
        if ga > 0 and gb > 0:
            total += _mu(a, b, lam)
        elif ga > 0 >= gb or gb > 0 >= ga:
            lo_s = a if a > 0 else _bracket_low(g, b)
            root = brentq(g, lo_s, b, xtol=1e-300, rtol=1e-15, maxiter=200)
            total += _mu(a, root, lam) if ga > 0 else _mu(root, b, lam)
    return total


def _bracket_low(g, b: float) -> float:
    # shrink towards 0 until g changes sign relative to g(b)
    s = b / 2
    sb = g(b) > 0
    while (g(s) > 0) == sb:
        s /= 2
        if s < 1e-300:
            break
    return s


def distribution_function(f: Function, alpha: float, lam: float = 3.0) -> float:
    """``λ_f(α) = μ_lam{|f| > α}``; simple functions ignore ``lam`` (their masses are given)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if isinstance(f, SimpleFunction):
        return math.fsum(m for a, m in zip(f.levels, f.masses) if a > alpha)
    return math.fsum(_piece_superlevel(pc, alpha, lam) for pc in f.pieces)


def rearrangement(f: Function, t: float, lam: float = 3.0) -> float:
    """``f*(t) = inf{α : λ_f(α) <= t}``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if isinstance(f, SimpleFunction):
        for a, v in zip(f.levels, f.cumulative):
            if t < v:
                return a
        return 0.0
    if f.is_zero:
        return 0.0
    if f.is_piecewise_constant:
        return rearrangement(profile_to_simple(f, lam), t, lam)
    # λ_f is nonincreasing and right-continuous in α: bisect on log α
    hi = 1.0
    while distribution_function(f, hi, lam) > t:
        hi *= 2.0
        if hi > 1e300:
            return INF
    lo = hi / 2.0
    if distribution_function(f, lo, lam) <= t:
        while lo > 1e-300 and distribution_function(f, lo, lam) <= t:
            lo /= 2.0
        if lo <= 1e-300:
            return 0.0
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if distribution_function(f, mid, lam) <= t:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    return hi


# ----------------------------------------------------------------------------
# the three norm formulas
# ----------------------------------------------------------------------------

def _norm_rearranged(f: SimpleFunction, p: float, q: float) -> float:
    # f* = a_j on [v_{j-1}, v_j); (q/p) ∫ t^{q/p-1} dt over it = v_j^{q/p} - v_{j-1}^{q/p}
    if math.isinf(q):
        return max((a * v ** (1.0 / p) for a, v in zip(f.levels, f.cumulative)), default=0.0)
    terms = []
    prev = 0.0
    for a, v in zip(f.levels, f.cumulative):
        terms.append(a ** q * (v ** (q / p) - prev ** (q / p)))
        prev = v
    return math.fsum(terms) ** (1.0 / q)


def _norm_distribution(f: SimpleFunction, p: float, q: float) -> float:
    # λ_f = v_j on [a_{j+1}, a_j); q ∫ α^{q-1} dα over it = a_j^q - a_{j+1}^q
    lv = list(f.levels) + [0.0]
    vs = []
    acc = 0.0
    for m in f.masses:
        acc += m
        vs.append(acc)
    if math.isinf(q):
        # sup of α λ_f(α)^{1/p} is approached as α increases to a_j
        return max((lv[j] * vs[j] ** (1.0 / p) for j in range(len(vs))), default=0.0)
    terms = [vs[j] ** (q / p) * (lv[j] ** q - lv[j + 1] ** q) for j in range(len(vs))]
    return math.fsum(terms) ** (1.0 / q)


def _below_exponent(x: float) -> int:
    """Largest integer ``σ`` with ``2^σ < x``."""
    m, e = math.frexp(x)
    return e - 2 if m == 0.5 else e - 1


def _norm_dyadic(f: SimpleFunction, p: float, q: float) -> float:
    if not f.levels:
        return 0.0
    top = _below_exponent(f.levels[0])
    bottom = _below_exponent(f.levels[-1])
    total_mass = math.fsum(f.masses)
    vals = []
    for sigma in range(bottom + 1, top + 1):
        lam_f = math.fsum(m for a, m in zip(f.levels, f.masses) if a > 2.0 ** sigma)
        vals.append((sigma, lam_f))
    if math.isinf(q):
        best = 2.0 ** bottom * total_mass ** (1.0 / p)
        for sigma, lam_f in vals:
            best = max(best, 2.0 ** sigma * lam_f ** (1.0 / p))
        return best
    # every σ <= bottom sees the full mass: geometric tail
    terms = [2.0 ** (bottom * q) / (1.0 - 2.0 ** (-q)) * total_mass ** (q / p)]
    terms.extend(2.0 ** (sigma * q) * lam_f ** (q / p) for sigma, lam_f in vals)
    return math.fsum(terms) ** (1.0 / q)


_FORMS = {"rearranged": _norm_rearranged, "distribution": _norm_distribution, "dyadic": _norm_dyadic}


def lorentz_norm(f: Function, params: LorentzParams, form: str = "rearranged") -> float:
    """``||f||_{L^{p,q}(μ)}`` by the requested formula (``inf`` when divergent)."""
    if form not in _FORMS:
        raise ValueError(f"unknown form {form!r}; choose from {FORMS}")
    p, q = params.p, params.q
    if isinstance(f, RadialProfile):
        if f.is_zero:
            return 0.0
        if f.is_piecewise_constant:
            try:
                f = profile_to_simple(f, params.lam)
            except ValueError:
                return INF
        elif q == p:
            return f.lp_norm(p, params.lam)
        else:
            raise NotImplementedError("L^{p,q} of non-constant profiles is only available for q = p")
    if not f.levels:
        return 0.0
    return _FORMS[form](f, p, q)


def lorentz_norms(f: Function, params: LorentzParams) -> dict[str, float]:
    return {form: lorentz_norm(f, params, form) for form in FORMS}


def dyadic_constant_bounds(q: float) -> tuple[float, float]:
    """Range of ``distribution / dyadic`` for simple functions."""
    if math.isinf(q):
        return 1.0, 2.0
    return (1.0 - 2.0 ** (-q)) ** (1.0 / q), (2.0 ** q - 1.0) ** (1.0 / q)
