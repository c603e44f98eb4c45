"""Dilation sets on the half-line and their covering / neighborhood numbers.

Every coordinate is a :class:`fractions.Fraction`, so counts and measures
are exact.  A set is a finite union of closed intervals and isolated points.

Block convention: ``block(E, k)`` is the closure of ``E ∩ [2^k, 2^{k+1})``,
so a point sitting exactly on ``2^{k+1}`` is assigned to block ``k+1`` only
and the blocks partition ``E``.  Covering intervals are closed and may be
placed anywhere (also outside ``I_k``).
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Number = "int | float | str | Fraction"
Component = tuple[Fraction, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def pow2(k: int) -> Fraction:
    return Fraction(2) ** k


def floor_log2(x: Fraction) -> int:
    """Largest integer ``k`` with ``2^k <= x`` (``x > 0``)."""
    if x <= 0:
        raise ValueError("floor_log2 of nonpositive number")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while pow2(k) > x:
        k -= 1
    while pow2(k + 1) <= x:
        k += 1
    return k


# ----------------------------------------------------------------------------
# component-list helpers (sorted, disjoint closed intervals; points are (x, x))
# ----------------------------------------------------------------------------

def _merge(comps: Iterable[Component]) -> list[Component]:
    out: list[Component] = []
    for a, b in sorted(comps):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def union_length(comps: Iterable[Component]) -> Fraction:
    return sum((b - a for a, b in _merge(comps)), Fraction(0))


def inflate(comps: Sequence[Component], radius: Fraction,
            clip: Component | None = None) -> list[Component]:
    """Closed ``radius``-neighborhood of ``comps``, optionally clipped."""
    grown = ((a - radius, b + radius) for a, b in comps)
    merged = _merge(grown)
    if clip is None:
        return merged
    lo, hi = clip
    out = []
    for a, b in merged:
        a, b = max(a, lo), min(b, hi)
        if a <= b:
            out.append((a, b))
    return out


def difference(outer: Sequence[Component], inner: Sequence[Component]) -> list[Component]:
    """``outer \\ inner`` up to endpoints (measure-level difference)."""
    out: list[Component] = []
    j = 0
    for a, b in outer:
        cur = a
        while j < len(inner) and inner[j][1] <= cur:
            j += 1
        i = j
        while i < len(inner) and inner[i][0] < b:
            c, e = inner[i]
            if c > cur:
                out.append((cur, min(c, b)))
            cur = max(cur, e)
            if cur >= b:
                break
            i += 1
        if cur < b:
            out.append((cur, b))
    return [(a, b) for a, b in out if b > a]


def distance(comps: Sequence[Component], x: Fraction) -> Fraction | None:
    """Exact distance from ``x`` to the union of ``comps`` (None if empty)."""
    if not comps:
        return None
    best = None
    for a, b in comps:
        if a <= x <= b:
            return Fraction(0)
        dd = a - x if x < a else x - b
        if best is None or dd < best:
            best = dd
    return best


def mu_mass(comps: Iterable[Component], lam: float) -> float:
    """Mass of a union of intervals under ``r^{lam-1} dr``."""
    total = []
    for a, b in comps:
        if isinstance(lam, int) or float(lam).is_integer():
            li = int(lam)
            total.append(float((b ** li - a ** li) / li))
        else:
            total.append((float(b) ** lam - float(a) ** lam) / lam)
    return math.fsum(total)


# ----------------------------------------------------------------------------
# DilationSet
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class DilationSet:
    """Finite union of closed intervals and points in ``(0, inf)``.

    ``resolution`` is the relative scale exponent ``M`` below which the set
    stops modelling its idealized target (``None`` when the finite set is
    itself the object of study).  ``truncation`` records the block range an
    infinite family was cut to.
    """

    intervals: tuple[Component, ...] = ()
    points: tuple[Fraction, ...] = ()
    resolution: int | None = None
    truncation: tuple[int, int] | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        comps = []
        for a, b in self.intervals:
            a, b = as_fraction(a), as_fraction(b)
            if a > b:
                raise ValueError(f"interval [{a}, {b}] has a > b")
            comps.append((a, b))
        comps.extend((as_fraction(x), as_fraction(x)) for x in self.points)
        for a, _ in comps:
            if a <= 0:
                raise ValueError(f"coordinates must be strictly positive, got {a}")
        merged = _merge(comps)
        object.__setattr__(self, "intervals", tuple(c for c in merged if c[1] > c[0]))
        object.__setattr__(self, "points", tuple(c[0] for c in merged if c[1] == c[0]))

    # -- views ---------------------------------------------------------------
    @cached_property
    def components(self) -> tuple[Component, ...]:
        comps = list(self.intervals) + [(x, x) for x in self.points]
        return tuple(sorted(comps))

    @property
    def is_empty(self) -> bool:
        return not self.intervals and not self.points

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    @property
    def has_genuine_mass(self) -> bool:
        """Positive measure that is part of the modelled set, not a proxy."""
        return self.resolution is None and self.measure > 0

    def __len__(self) -> int:
        return len(self.components)

    def __contains__(self, x) -> bool:
        x = as_fraction(x)
        return any(a <= x <= b for a, b in self.components)

    def issubset(self, other: "DilationSet") -> bool:
        return all(any(c <= a and b <= e for c, e in other.components)
                   for a, b in self.components)

    def union(self, other: "DilationSet") -> "DilationSet":
        res = [r for r in (self.resolution, other.resolution) if r is not None]
        return DilationSet(self.intervals + other.intervals, self.points + other.points,
                           resolution=min(res) if res else None,
                           truncation=_join_trunc(self.truncation, other.truncation))

    def scaled(self, m: int) -> "DilationSet":
        """The dilate ``2^m · E``."""
        f = pow2(m)
        tr = None if self.truncation is None else (self.truncation[0] + m, self.truncation[1] + m)
        return DilationSet(tuple((a * f, b * f) for a, b in self.intervals),
                           tuple(x * f for x in self.points), self.resolution, tr)

    def lattice_exponent(self) -> int | None:
        """Smallest ``M`` with every coordinate in block ``k`` a multiple of ``2^{k-M}``.

        ``None`` when some coordinate is not a dyadic rational.
        """
        best = 0
        for a, b in self.components:
            for x in (a, b):
                den = x.denominator
                if den & (den - 1):
                    return None
                k = floor_log2(x)
                # x = num / 2^e, multiple of 2^{k-M} iff k - M <= -e + v2(num)
                e = den.bit_length() - 1
                num = x.numerator
                v2 = (num & -num).bit_length() - 1
                best = max(best, k + e - v2)
        return best

    @cached_property
    def _blocks(self) -> dict[int, tuple[Component, ...]]:
        out: dict[int, list[Component]] = {}
        for a, b in self.components:
            # a lies in [2^k, 2^{k+1}); later blocks start at or below b
            k = floor_log2(a)
            while pow2(k) <= b:
                out.setdefault(k, []).append((max(a, pow2(k)), min(b, pow2(k + 1))))
                k += 1
        return {k: tuple(v) for k, v in sorted(out.items())}

    def block_components(self, k: int) -> tuple[Component, ...]:
        return self._blocks.get(k, ())

    def nonempty_blocks(self) -> list[int]:
        return list(self._blocks)

    def to_json(self) -> dict:
        return {
            "intervals": [[str(a), str(b)] for a, b in self.intervals],
            "points": [str(x) for x in self.points],
            "resolution": self.resolution,
            "truncation": list(self.truncation) if self.truncation else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DilationSet":
        tr = data.get("truncation")
        return cls(tuple((as_fraction(a), as_fraction(b)) for a, b in data.get("intervals", [])),
                   tuple(as_fraction(x) for x in data.get("points", [])),
                   data.get("resolution"), tuple(tr) if tr else None)

    def __repr__(self) -> str:
        n_i, n_p = len(self.intervals), len(self.points)
        if n_i + n_p <= 6:
            parts = [f"[{a}, {b}]" for a, b in self.intervals] + [str(x) for x in self.points]
            body = ", ".join(parts)
        else:
            body = f"{n_i} intervals, {n_p} points"
        return f"DilationSet({body}; resolution={self.resolution}, truncation={self.truncation})"


def _join_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return (min(a[0], b[0]), max(a[1], b[1]))


EMPTY = DilationSet()


def from_components(comps: Iterable[Component], resolution=None, truncation=None) -> DilationSet:
    ivs, pts = [], []
    for a, b in comps:
        (pts.append(a) if a == b else ivs.append((a, b)))
    return DilationSet(tuple(ivs), tuple(pts), resolution, truncation)


# ----------------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------------

def lattice_sample(E: DilationSet, m: int, resolution: int | None = None) -> DilationSet:
    """Points of the grid ``2^{k-m} Z`` lying in ``E^k``, for every block ``k``; isolated points are kept."""
    pts = set(E.points)
    for k in E.nonempty_blocks():
        h = pow2(k - m)
        for a, b in E.block_components(k):
            if a == b:
                continue
            i0 = -((-a) // h)
            i1 = b // h
            pts.update(i * h for i in range(int(i0), int(i1) + 1))
    return DilationSet(points=tuple(sorted(pts)), resolution=resolution, truncation=E.truncation)


def lacunary(ratio=Fraction(1, 2), k_range: tuple[int, int] = (-20, 0)) -> DilationSet:
    """Points ``ratio^{-k}`` for ``k`` in the inclusive range."""
    ratio = as_fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("lacunary ratio must lie in (0, 1)")
    k0, k1 = k_range
    pts = tuple(ratio ** (-k) for k in range(k0, k1 + 1))
    return DilationSet(points=pts, truncation=(k0, k1), label=f"lacunary({ratio})")


def cantor(depth: int, block=0, remove=Fraction(1, 3), max_depth: int = 16) -> DilationSet:
    """Middle-``remove`` Cantor iterate inside ``[2^k, 2^{k+1}]`` (or a given interval)."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the resolution budget {max_depth}")
    remove = as_fraction(remove)
    if not 0 < remove < 1:
        raise ValueError("removed fraction must lie in (0, 1)")
    if isinstance(block, int):
        lo, hi = pow2(block), pow2(block + 1)
    else:
        lo, hi = (as_fraction(x) for x in block)
    keep = (1 - remove) / 2
    ivs = [(lo, hi)]
    for _ in range(depth):
        nxt = []
        for a, b in ivs:
            w = (b - a) * keep
            nxt.append((a, a + w))
            nxt.append((b - w, b))
        ivs = nxt
    smallest = keep ** depth
    resolution = floor_log2(1 / smallest) if depth else 0
    return DilationSet(tuple(ivs), (), resolution=resolution, label=f"cantor({depth})")


def dilated(base: DilationSet, k_range: tuple[int, int]) -> DilationSet:
    """``{2^k x : x in base, k in k_range}`` (inclusive range)."""
    k0, k1 = k_range
    ivs, pts = [], []
    for k in range(k0, k1 + 1):
        f = pow2(k)
        ivs.extend((a * f, b * f) for a, b in base.intervals)
        pts.extend(x * f for x in base.points)
    lo_block = floor_log2(base.components[0][0]) if not base.is_empty else 0
    hi_block = floor_log2(base.components[-1][1]) if not base.is_empty else 0
    return DilationSet(tuple(ivs), tuple(pts), base.resolution,
                       truncation=(k0 + lo_block, k1 + hi_block), label=f"dilated({base.label})")


def explicit(items: Iterable, resolution=None) -> DilationSet:
    """Points (scalars) and closed intervals (pairs) from a flat list."""
    ivs, pts = [], []
    for it in items:
        if isinstance(it, (tuple, list)):
            ivs.append((as_fraction(it[0]), as_fraction(it[1])))
        else:
            pts.append(as_fraction(it))
    return DilationSet(tuple(ivs), tuple(pts), resolution)


def convergent(i_range: tuple[int, int] = (1, 16), block: int = 0) -> DilationSet:
    """``2^k`` together with ``2^k (1 + 2^{-i})``: a sequence accumulating at the block's left end."""
    i0, i1 = i_range
    if i0 < 1:
        raise ValueError("convergent sequence needs i >= 1")
    b = pow2(block)
    pts = (b,) + tuple(b * (1 + pow2(-i)) for i in range(i0, i1 + 1))
    return DilationSet(points=pts, resolution=i1, label=f"convergent({i0}..{i1})")


def random_points(n: int, block: int = 0, M: int = 12, seed: int = 0) -> DilationSet:
    """``n`` distinct random points of the lattice ``2^{block-M} Z`` inside ``I_block``."""
    if not 0 < n <= 2 ** M:
        raise ValueError("need 0 < n <= 2^M")
    rng = random.Random(seed)
    idx = rng.sample(range(2 ** M), n)
    pts = tuple(pow2(block) * (1 + Fraction(i, 2 ** M)) for i in idx)
    return DilationSet(points=pts, resolution=M, label=f"random({n},seed={seed})")


def generate_set(descriptor) -> DilationSet:
    """Build a set from a descriptor string or dict (see :mod:`radmax.parsing`)."""
    from .parsing import parse_set
    return parse_set(descriptor)


# ----------------------------------------------------------------------------
# covering numbers
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverCount:
    value: int
    scale: Fraction

    def __int__(self):
        return self.value


def block(E: DilationSet, k: int) -> DilationSet:
    """``E ∩ I_k`` with the half-open assignment of the shared endpoint."""
    return from_components(E.block_components(k), E.resolution)


def _greedy_cover(comps: Sequence[Component], a: Fraction) -> int:
    count = 0
    reach = None
    for lo, hi in comps:
        if reach is not None and hi <= reach:
            continue
        start = lo if reach is None or lo > reach else reach
        n = max(1, math.ceil((hi - start) / a))
        count += n
        reach = start + n * a
    return count


def _binary_cover(comps: Sequence[Component], h: Fraction) -> int:
    count = 0
    reach = None
    for lo, hi in comps:
        if reach is not None and hi <= reach:
            continue
        x = lo if reach is None or lo > reach else reach
        start = math.floor(x / h) * h
        n = max(1, math.ceil((hi - start) / h))
        count += n
        reach = start + n * h
    return count


def _comps(E) -> Sequence[Component]:
    return E.components if isinstance(E, DilationSet) else E


def entropy_number(E, a) -> CoverCount:
    """Minimal number of closed length-``a`` intervals covering ``E`` (greedy sweep)."""
    a = as_fraction(a)
    if a <= 0:
        raise ValueError("cover length must be positive")
    return CoverCount(_greedy_cover(_comps(E), a), a)


def block_entropy(E: DilationSet, k: int, a) -> int:
    """``N(E^k, a)``."""
    return _greedy_cover(E.block_components(k), as_fraction(a))


def binary_entropy(E, j: int) -> CoverCount:
    """Minimal number of binary intervals ``[m 2^j, (m+1) 2^j]`` covering ``E``."""
    h = pow2(j)
    return CoverCount(_binary_cover(_comps(E), h), h)


# ----------------------------------------------------------------------------
# neighborhoods and shells
# ----------------------------------------------------------------------------

def block_interval(k: int) -> Component:
    return (pow2(k), pow2(k + 1))


def neighborhood_components(E: DilationSet, k: int, n: int) -> list[Component]:
    """``W_n^k`` as a union of intervals."""
    comps = E.block_components(k)
    if not comps:
        return []
    return inflate(comps, pow2(k - n + 1), block_interval(k))


def shell_components(E: DilationSet, k: int, n: int) -> list[Component]:
    """``D_n^k`` as a union of intervals (up to endpoints)."""
    comps = E.block_components(k)
    if not comps:
        return []
    outer = inflate(comps, pow2(k - n + 1), block_interval(k))
    inner = inflate(comps, pow2(k - n), block_interval(k))
    return difference(outer, inner)


class BlockGeometry:
    """Gap structure of ``E^k`` inside ``I_k`` for O(log) neighborhood lengths.

    ``|{r in I_k : dist(r, E^k) <= ρ}|`` is the covered length, plus
    ``min(g, 2ρ)`` for every inner gap ``g``, plus ``min(ρ, room)`` at the
    two ends of the block.
    """

    def __init__(self, comps: Sequence[Component], k: int):
        lo, hi = block_interval(k)
        self.empty = not comps
        if self.empty:
            return
        self.core = sum((b - a for a, b in comps), Fraction(0))
        self.left = comps[0][0] - lo
        self.right = hi - comps[-1][1]
        gaps = sorted(c - b for (_, b), (c, _) in zip(comps, comps[1:]))
        self.gaps = gaps
        self.prefix = [Fraction(0)]
        for g in gaps:
            self.prefix.append(self.prefix[-1] + g)

    def neighborhood_length(self, rho: Fraction) -> Fraction:
        if self.empty:
            return Fraction(0)
        two = 2 * rho
        i = bisect.bisect_left(self.gaps, two)
        inner = self.prefix[i] + two * (len(self.gaps) - i)
        return self.core + inner + min(rho, self.left) + min(rho, self.right)


def block_geometry(E: DilationSet, k: int) -> BlockGeometry:
    cache = E.__dict__.setdefault("_geometry_cache", {})
    geo = cache.get(k)
    if geo is None:
        geo = cache[k] = BlockGeometry(E.block_components(k), k)
    return geo


def neighborhood_measure(E: DilationSet, k: int, n: int) -> Fraction:
    """``|W_n^k|``, exact."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return block_geometry(E, k).neighborhood_length(pow2(k - n + 1))


def shell_measure(E: DilationSet, k: int, n: int) -> Fraction:
    """``|D_n^k| = |W_n^k| - |{r in I_k : dist <= 2^{k-n}}|``, exact."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    geo = block_geometry(E, k)
    return geo.neighborhood_length(pow2(k - n + 1)) - geo.neighborhood_length(pow2(k - n))


def _block_arrays(E: DilationSet, k: int):
    cache = E.__dict__.setdefault("_block_array_cache", {})
    arrs = cache.get(k)
    if arrs is None:
        comps = E.block_components(k)
        arrs = cache[k] = (np.array([float(a) for a, _ in comps]), np.array([float(b) for _, b in comps]))
    return arrs


def neighborhood_mu(E: DilationSet, k: int, rho, lam: float) -> float:
    """``μ_lam{r in I_k : dist(r, E^k) <= rho}`` in floating point (one linear pass)."""
    a, b = _block_arrays(E, k)
    if not len(a):
        return 0.0
    lo_k, hi_k = 2.0 ** k, 2.0 ** (k + 1)
    rho = float(rho)
    lo = np.maximum(a - rho, lo_k)
    hi = np.minimum(b + rho, hi_k)
    # right ends are increasing, so a new merged component starts where lo passes the previous hi
    start = np.ones(len(lo), dtype=bool)
    start[1:] = lo[1:] > hi[:-1]
    end = np.ones(len(hi), dtype=bool)
    end[:-1] = start[1:]
    return float(np.sum(hi[end] ** lam - lo[start] ** lam) / lam)


def shell_mu(E: DilationSet, k: int, n: int, lam: float) -> float:
    """``μ_lam(D_n^k)`` in floating point."""
    return neighborhood_mu(E, k, 2.0 ** (k - n + 1), lam) - neighborhood_mu(E, k, 2.0 ** (k - n), lam)


def neighborhood_in(E: DilationSet, interval: Component, radius) -> Fraction:
    """``|{r in I : dist(r, E ∩ I) <= radius}|`` for an arbitrary closed ``I``."""
    lo, hi = interval
    inside = []
    for a, b in E.components:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 <= b2:
            inside.append((a2, b2))
    if not inside:
        return Fraction(0)
    return union_length(inflate(inside, as_fraction(radius), (lo, hi)))


def restrict(E: DilationSet, interval: Component) -> list[Component]:
    lo, hi = interval
    out = []
    for a, b in E.components:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 <= b2:
            out.append((a2, b2))
    return out


def local_width(E0: DilationSet, n: int) -> Fraction:
    """``w_n = |{r : dist(r, E0) <= 2^{-n}}|`` over the whole line; ``E0 ⊆ [1, 2]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not E0.is_empty and (E0.components[0][0] < 1 or E0.components[-1][1] > 2):
        raise ValueError("local_width needs a base set inside [1, 2]")
    return union_length(inflate(E0.components, pow2(-n)))


def shell_index(E: DilationSet, k: int, r) -> int | None:
    """The ``n`` with ``r in D_n^k``, or ``None`` (``r`` outside ``I_k``, on ``Ē``, or ``E^k`` empty)."""
    r = as_fraction(r)
    lo, hi = block_interval(k)
    if not lo <= r <= hi:
        return None
    dist = distance(E.block_components(k), r)
    if dist is None or dist == 0:
        return None
    # 2^{k-n} < dist <= 2^{k-n+1}  <=>  k - n + 1 = ceil(log2 dist)
    m = floor_log2(dist)
    c = m if pow2(m) == dist else m + 1
    return k + 1 - c


# ----------------------------------------------------------------------------
# entropy exponent
# ----------------------------------------------------------------------------

@dataclass
class KappaEstimate:
    deltas: list[Fraction]
    values: list[float]
    kappa_hat: float
    below_resolution: list[bool]
    truncation: tuple[int, int] | None

    def rows(self):
        for d, v, flag in zip(self.deltas, self.values, self.below_resolution):
            yield float(d), v, flag


def kappa_value(E: DilationSet, delta) -> float:
    """``sup_k log(1 + N(E^k, 2^k δ)) / log(1 + 1/δ)`` over the nonempty blocks."""
    delta = as_fraction(delta)
    den = math.log1p(1 / float(delta))
    best = 0.0
    for k in E.nonempty_blocks():
        n = block_entropy(E, k, pow2(k) * delta)
        best = max(best, math.log1p(n) / den)
    return best


def kappa_estimate(E: DilationSet, delta_grid: Sequence) -> KappaEstimate:
    deltas = [as_fraction(d) for d in delta_grid]
    for d in deltas:
        if not 0 < d < Fraction(1, 2):
            raise ValueError(f"delta {d} outside (0, 1/2)")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("delta grid must be strictly decreasing")
    flags = [E.resolution is not None and d < pow2(-E.resolution) for d in deltas]
    values = [kappa_value(E, d) for d in deltas]
    admissible = [v for v, f in zip(values, flags) if not f]
    kappa_hat = admissible[-1] if admissible else values[-1]
    return KappaEstimate(deltas, values, kappa_hat, flags, E.truncation)


def critical_exponent(kappa: float, d: int) -> float:
    """``p(E) = 1 + κ/(d-1)``."""
    if not 0 <= kappa <= 1:
        raise ValueError("kappa must lie in [0, 1]")
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return 1 + kappa / (d - 1)
