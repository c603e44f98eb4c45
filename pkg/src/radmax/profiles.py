"""Radial profiles ``f_0`` built from power, power-log and constant pieces.

A profile is a finite list of disjoint pieces ``coef * s^beta`` (optionally
divided by ``log(1/s)``) on closed intervals.  Everything that can be
integrated in closed form is integrated here; the quadrature paths in
:mod:`radmax.spherical` only ever see the raw arrays from
:meth:`RadialProfile.arrays`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import mpmath
import numpy as np

CONSTANT, POWER, POWERLOG = 0, 1, 2
_KIND_CODES = {"constant": CONSTANT, "power": POWER, "powerlog": POWERLOG}

INF = math.inf


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    kind: str = "constant"
    beta: float = 0.0
    coef: float = 1.0

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ValueError(f"unknown piece kind {self.kind!r}")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not 0 <= self.lo < self.hi:
            raise ValueError(f"bad piece support [{self.lo}, {self.hi}]")
        if self.kind == "powerlog" and self.hi >= 1:
            raise ValueError("powerlog pieces need support inside [0, 1)")
        if self.kind == "constant" and self.beta != 0:
            raise ValueError("constant pieces carry no exponent")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "constant":
            v = np.full_like(s, self.coef)
        elif self.kind == "power":
            with np.errstate(divide="ignore"):
                v = self.coef * s ** self.beta
        else:
            with np.errstate(divide="ignore"):
                v = self.coef * s ** self.beta / np.log(1.0 / s)
        return v

    def integral(self, gamma: float, a: float, b: float) -> float:
        """``∫_a^b s^gamma * piece(s) ds`` with ``[a, b] ⊆ [lo, hi]``."""
        if b <= a:
            return 0.0
        if self.kind == "powerlog":
            return self.coef * int_pow_log(self.beta + gamma + 1, 1.0, a, b)
        return self.coef * int_power(self.beta + gamma, a, b)


def int_power(e: float, a: float, b: float) -> float:
    """``∫_a^b s^e ds`` for ``0 <= a <= b <= inf`` (``inf`` when divergent)."""
    if b <= a:
        return 0.0
    if e == -1.0:
        if a == 0 or b == INF:
            return INF
        return math.log(b / a)
    e1 = e + 1.0
    if b == INF:
        if e1 >= 0:
            return INF
        return -a ** e1 / e1 if a > 0 else INF
    if a == 0:
        if e1 <= 0:
            return INF
        return b ** e1 / e1
    if e == 0.0:
        return b - a
    if b - a < a:
        # expm1/log1p form keeps short windows free of cancellation
        return a ** e1 * math.expm1(e1 * math.log1p((b - a) / a)) / e1
    return (b ** e1 - a ** e1) / e1


def int_pow_log(c: float, m: float, a: float, b: float) -> float:
    """``∫_a^b s^{c-1} log(1/s)^{-m} ds`` for ``0 <= a < b < 1``.

    With ``u = log(1/s)`` this is ``∫ e^{-cu} u^{-m} du`` over
    ``[log(1/b), log(1/a)]``, an incomplete gamma function.
    """
    if b <= a:
        return 0.0
    if not b < 1:
        raise ValueError("power-log integrals need b < 1")
    ub = -math.log(b)
    ua = INF if a == 0 else -math.log(a)
    if m == 0:
        return int_power(c - 1.0, a, b)
    if c > 0:
        lo, hi = c * ub, (mpmath.inf if ua == INF else c * ua)
        return float(mpmath.power(c, m - 1) * mpmath.gammainc(1 - m, lo, hi))
    if c == 0:
        if ua == INF:
            return INF if m <= 1 else ub ** (1 - m) / (m - 1)
        return math.log(ua / ub) if m == 1 else (ua ** (1 - m) - ub ** (1 - m)) / (1 - m)
    if ua == INF:
        return INF
    return float(mpmath.quad(lambda u: mpmath.exp(-c * u) * u ** (-m), [ub, ua]))


@dataclass(frozen=True)
class RadialProfile:
    """Profile ``f_0`` of a radial function ``f(x) = f_0(|x|)``."""

    pieces: tuple[Piece, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        ps = tuple(sorted(self.pieces, key=lambda p: p.lo))
        for p, q in zip(ps, ps[1:]):
            if q.lo < p.hi:
                raise ValueError("profile pieces overlap")
        object.__setattr__(self, "pieces", ps)

    # -- evaluation ------------------------------------------------------------
    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for p in self.pieces:
            mask = (s >= p.lo) & (s <= p.hi)
            if np.any(mask):
                out[mask] = p(s[mask])
        return out if out.ndim else float(out)

    @property
    def is_zero(self) -> bool:
        return all(p.coef == 0 for p in self.pieces)

    @property
    def support(self) -> tuple[float, float] | None:
        live = [p for p in self.pieces if p.coef != 0]
        if not live:
            return None
        return live[0].lo, live[-1].hi

    @property
    def is_piecewise_constant(self) -> bool:
        return all(p.kind == "constant" for p in self.pieces)

    @property
    def is_nonnegative(self) -> bool:
        return all(p.coef >= 0 for p in self.pieces)

    def breakpoints(self) -> list[float]:
        pts = sorted({x for p in self.pieces for x in (p.lo, p.hi) if math.isfinite(x)})
        return pts

    def arrays(self):
        """Piece data as contiguous arrays for the quadrature kernels."""
        n = len(self.pieces)
        lo = np.empty(n)
        hi = np.empty(n)
        kind = np.empty(n, dtype=np.int32)
        beta = np.empty(n)
        coef = np.empty(n)
        for i, p in enumerate(self.pieces):
            lo[i], hi[i], kind[i], beta[i], coef[i] = p.lo, p.hi, _KIND_CODES[p.kind], p.beta, p.coef
        return lo, hi, kind, beta, coef

    # -- algebra -----------------------------------------------------------------
    def scaled(self, c: float) -> "RadialProfile":
        return RadialProfile(tuple(replace(p, coef=p.coef * c) for p in self.pieces), self.label)

    def times_power(self, gamma: float) -> "RadialProfile":
        """Pointwise product with ``s^gamma``."""
        out = []
        for p in self.pieces:
            kind = "power" if p.kind == "constant" else p.kind
            out.append(replace(p, kind=kind, beta=p.beta + gamma))
        return RadialProfile(tuple(out), self.label)

    def dilate(self, m: float) -> "RadialProfile":
        """``s -> f_0(s / 2^m)`` (support moved by ``2^m``)."""
        f = 2.0 ** m
        out = []
        for p in self.pieces:
            if p.kind == "powerlog":
                raise ValueError("power-log pieces are not dilation-stable")
            out.append(Piece(p.lo * f, p.hi * f, p.kind, p.beta, p.coef * f ** (-p.beta)))
        return RadialProfile(tuple(out), self.label)

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return RadialProfile(self.pieces + other.pieces, "+".join(x for x in (self.label, other.label) if x))

    # -- closed-form integrals ------------------------------------------------------
    def integral(self, gamma: float, a: float, b: float) -> float:
        """``∫_a^b s^gamma f_0(s) ds``."""
        if b <= a:
            return 0.0
        parts = []
        for p in self.pieces:
            lo, hi = max(a, p.lo), min(b, p.hi)
            if hi > lo and p.coef != 0:
                parts.append(p.integral(gamma, lo, hi))
        if any(math.isinf(x) for x in parts):
            return math.copysign(INF, sum(x for x in parts if math.isinf(x)))
        return math.fsum(parts)

    def lp_norm(self, p: float, lam: float) -> float:
        """``(∫ |f_0|^p s^{lam-1} ds)^{1/p}``, the ``L^p(μ_lam)`` norm (``inf`` if divergent)."""
        if not 1 <= p < INF:
            raise ValueError("lp_norm needs 1 <= p < inf")
        parts = []
        for q in self.pieces:
            if q.coef == 0:
                continue
            c = abs(q.coef) ** p
            if q.kind == "powerlog":
                parts.append(c * int_pow_log(q.beta * p + lam, p, q.lo, q.hi))
            else:
                parts.append(c * int_power(q.beta * p + lam - 1, q.lo, q.hi))
        if any(math.isinf(x) for x in parts):
            return INF
        return math.fsum(parts) ** (1.0 / p)

    def mass(self, lam: float) -> float:
        """``μ_lam`` mass of the support."""
        return math.fsum(int_power(lam - 1, q.lo, q.hi) for q in self.pieces if q.coef != 0)

    def __repr__(self) -> str:
        if self.label:
            return f"RadialProfile({self.label})"
        return f"RadialProfile({len(self.pieces)} pieces)"


# ----------------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------------

def zero() -> RadialProfile:
    return RadialProfile((), "0")


def constant(c: float = 1.0, on: tuple[float, float] = (0.0, INF)) -> RadialProfile:
    return RadialProfile((Piece(on[0], on[1], "constant", 0.0, c),), f"const({c})")


def indicator(a: float, b: float) -> RadialProfile:
    return RadialProfile((Piece(a, b, "constant", 0.0, 1.0),), f"chi[{a},{b}]")


def ball(radius: float = 1.0) -> RadialProfile:
    return RadialProfile((Piece(0.0, radius, "constant", 0.0, 1.0),), f"ball({radius})")


def power(beta: float, on: tuple[float, float], coef: float = 1.0) -> RadialProfile:
    return RadialProfile((Piece(on[0], on[1], "power", beta, coef),), f"s^{beta}")


def powerlog(beta: float, on: tuple[float, float], coef: float = 1.0) -> RadialProfile:
    return RadialProfile((Piece(on[0], on[1], "powerlog", beta, coef),), f"s^{beta}/log")


def step(edges: Sequence[float], values: Sequence[float]) -> RadialProfile:
    """Piecewise constant: ``values[i]`` on ``[edges[i], edges[i+1]]``."""
    if len(edges) != len(values) + 1:
        raise ValueError("need one more edge than values")
    pieces = tuple(Piece(a, b, "constant", 0.0, v) for a, b, v in zip(edges, edges[1:], values) if v != 0)
    return RadialProfile(pieces, "step")


def geometric_step(s0: float, ratio: float, values: Sequence[float]) -> RadialProfile:
    edges = [s0 * ratio ** i for i in range(len(values) + 1)]
    return step(edges, values)


def combine(profiles: Iterable[RadialProfile]) -> RadialProfile:
    pieces = tuple(p for prof in profiles for p in prof.pieces)
    return RadialProfile(pieces)
