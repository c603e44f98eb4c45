"""Pure-Python fallback for the quadrature kernels.

Mirrors ``_kernels.pyx`` operation for operation (same panel order, same
acceptance rule, plain left-to-right summation) so both backends agree to
rounding.  Piece arrays come from :meth:`RadialProfile.arrays`.
"""
import math

import numpy as np

BACKEND = "python"
_EPS = 2.220446049250313e-16


def _piece_at(lo, hi, x):
    i = int(np.searchsorted(lo, x, side="right")) - 1
    if i >= 0 and x <= hi[i]:
        return i
    return -1


def _eval(kind, beta, coef, s):
    if kind == 0:
        return np.full_like(s, coef)
    if kind == 1:
        return coef * s ** beta
    return coef * s ** beta / np.log(1.0 / s)


def _edges(lo, hi, a, b, transform):
    pts = []
    for arr in (lo, hi):
        for x in arr:
            if a < x < b:
                pts.append(x)
    pts.sort()
    out = [transform(a)]
    for x in pts:
        y = transform(x)
        if y > out[-1]:
            out.append(y)
    end = transform(b)
    if end > out[-1]:
        out.append(end)
    return out


def _adaptive(Q, edges, tol, maxdepth):
    stack = []
    ref = 0.0
    n_eval = 0
    span = edges[-1] - edges[0]
    for a, b in zip(edges, edges[1:]):
        q = Q(a, b)
        n_eval += 1
        ref += abs(q)
        stack.append((a, b, q, 0))
    if ref == 0.0 or span <= 0.0:
        return 0.0, 0.0, n_eval, True
    stack.reverse()
    total = 0.0
    err = 0.0
    ok = True
    while stack:
        a, b, q, depth = stack.pop()
        m = 0.5 * (a + b)
        q1 = Q(a, m)
        q2 = Q(m, b)
        n_eval += 2
        s = q1 + q2
        diff = abs(s - q)
        allowed = tol * ref * (b - a) / span
        floor = 50.0 * _EPS * abs(s)
        if allowed < floor:
            allowed = floor
        if diff <= allowed or depth >= maxdepth:
            if diff > allowed:
                ok = False
            total += s
            err += diff
        else:
            stack.append((m, b, q2, depth + 1))
            stack.append((a, m, q1, depth + 1))
    # panels that hit the depth cap are acceptable while the global error stays within budget
    return total, err, n_eval, ok or err <= tol * ref


def spherical_mean_raw(r, t, d, cd, lo, hi, kind, beta, coef, xg, wg, tol, maxdepth):
    """``c_d ∫ K_t(r, s) f_0(s) ds`` by adaptive Gauss-Legendre panels.

    ``d == 3`` integrates in ``s`` against ``s / (4rt)``; every other ``d``
    uses ``s^2 = A^2 + 4rt sin^2 φ`` which turns the kernel into
    ``(sin φ cos φ)^{d-2} dφ`` and removes the endpoint singularities.
    """
    A = abs(r - t)
    B = r + t
    rt4 = 4.0 * r * t
    if d == 3:
        edges = _edges(lo, hi, A, B, lambda x: x)

        def Q(a, b):
            half = 0.5 * (b - a)
            mid = 0.5 * (a + b)
            i = _piece_at(lo, hi, mid)
            if i < 0:
                return 0.0
            s = mid + half * xg
            return half * float(np.dot(wg, s * _eval(kind[i], beta[i], coef[i], s)))

        val, err, n, ok = _adaptive(Q, edges, tol, maxdepth)
        return cd * val / rt4, cd * err / rt4, n, ok

    def to_phi(x):
        if x <= A:
            return 0.0
        if x >= B:
            return 0.5 * math.pi
        v = (x - A) * (x + A) / rt4
        return math.asin(math.sqrt(min(1.0, v)))

    edges = _edges(lo, hi, A, B, to_phi)
    p = d - 2

    def Q(a, b):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        sm = math.sqrt(A * A + rt4 * math.sin(mid) ** 2)
        i = _piece_at(lo, hi, sm)
        if i < 0:
            return 0.0
        phi = mid + half * xg
        sn = np.sin(phi)
        cs = np.cos(phi)
        s = np.sqrt(A * A + rt4 * sn * sn)
        w = (sn * cs) ** p if p else 1.0
        return half * float(np.dot(wg, w * _eval(kind[i], beta[i], coef[i], s)))

    val, err, n, ok = _adaptive(Q, edges, tol, maxdepth)
    return cd * val, cd * err, n, ok


def singular_integral_raw(c, a, b, side, gamma, lo, hi, kind, beta, coef, xg, wg, tol, maxdepth):
    """``∫_a^b s^gamma |s - c|^{-1/2} f_0(s) ds`` with ``c`` at one end.

    ``side = +1`` means ``c <= a`` (substitute ``s = c + u^2``), ``side = -1``
    means ``c >= b`` (``s = c - u^2``).  The substitution cancels the
    square-root singularity; the remaining integrand is ``2 s^gamma f_0(s)``.
    """
    if b <= a:
        return 0.0, 0.0, 0, True
    if side > 0:
        def to_u(x):
            return math.sqrt(max(x - c, 0.0))
        edges = _edges(lo, hi, a, b, to_u)

        def s_of(u):
            return c + u * u
    else:
        def to_u(x):
            return -math.sqrt(max(c - x, 0.0))
        edges = _edges(lo, hi, a, b, to_u)

        def s_of(u):
            return c - u * u

    def Q(ua, ub):
        half = 0.5 * (ub - ua)
        mid = 0.5 * (ua + ub)
        i = _piece_at(lo, hi, s_of(mid))
        if i < 0:
            return 0.0
        u = mid + half * xg
        s = s_of(u)
        return half * float(np.dot(wg, 2.0 * s ** gamma * _eval(kind[i], beta[i], coef[i], s)))

    return _adaptive(Q, edges, tol, maxdepth)
