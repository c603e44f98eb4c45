# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernels; see ``_kernels_py.py`` for the reference version."""
from libc.math cimport fabs, sqrt, sin, cos, asin, log, pow, M_PI
from libc.stdlib cimport malloc, free, qsort

BACKEND = "cython"

cdef double _EPS = 2.220446049250313e-16


cdef int _cmp(const void* a, const void* b) noexcept nogil:
    cdef double x = (<double*>a)[0]
    cdef double y = (<double*>b)[0]
    return (x > y) - (x < y)


cdef inline int _piece_at(const double[::1] lo, const double[::1] hi, double x) noexcept nogil:
    # last piece with lo <= x
    cdef Py_ssize_t left = 0, right = lo.shape[0], mid
    while left < right:
        mid = (left + right) // 2
        if lo[mid] <= x:
            left = mid + 1
        else:
            right = mid
    if left >= 1 and x <= hi[left - 1]:
        return <int>(left - 1)
    return -1


cdef inline double _eval(int kind, double beta, double coef, double s) noexcept nogil:
    if kind == 0:
        return coef
    if kind == 1:
        return coef * pow(s, beta)
    return coef * pow(s, beta) / log(1.0 / s)


cdef struct Ctx:
    int mode          # 0: s-mode, 1: phi-mode, 2: u-mode (+), 3: u-mode (-)
    double A
    double rt4
    int p
    double c
    double gamma


cdef inline double _s_of(Ctx* ctx, double x) noexcept nogil:
    cdef double sn
    if ctx.mode == 0:
        return x
    if ctx.mode == 1:
        sn = sin(x)
        return sqrt(ctx.A * ctx.A + ctx.rt4 * sn * sn)
    if ctx.mode == 2:
        return ctx.c + x * x
    return ctx.c - x * x


cdef double _panel(Ctx* ctx, double a, double b,
                   const double[::1] lo, const double[::1] hi, const int[::1] kind,
                   const double[::1] beta, const double[::1] coef,
                   const double[::1] xg, const double[::1] wg) noexcept nogil:
    cdef double half = 0.5 * (b - a)
    cdef double mid = 0.5 * (a + b)
    cdef int i = _piece_at(lo, hi, _s_of(ctx, mid))
    if i < 0:
        return 0.0
    cdef Py_ssize_t j, n = xg.shape[0]
    cdef double x, s, w, sn, cs, acc = 0.0
    cdef int kd = kind[i]
    cdef double bt = beta[i], cf = coef[i]
    for j in range(n):
        x = mid + half * xg[j]
        if ctx.mode == 0:
            acc += wg[j] * (x * _eval(kd, bt, cf, x))
        elif ctx.mode == 1:
            sn = sin(x)
            cs = cos(x)
            s = sqrt(ctx.A * ctx.A + ctx.rt4 * sn * sn)
            w = pow(sn * cs, ctx.p) if ctx.p else 1.0
            acc += wg[j] * (w * _eval(kd, bt, cf, s))
        else:
            s = ctx.c + x * x if ctx.mode == 2 else ctx.c - x * x
            acc += wg[j] * (2.0 * pow(s, ctx.gamma) * _eval(kd, bt, cf, s))
    return half * acc


cdef double _to_var(Ctx* ctx, double x, double a, double b) noexcept nogil:
    cdef double v
    if ctx.mode == 0:
        return x
    if ctx.mode == 1:
        if x <= a:
            return 0.0
        if x >= b:
            return 0.5 * M_PI
        v = (x - ctx.A) * (x + ctx.A) / ctx.rt4
        if v > 1.0:
            v = 1.0
        return asin(sqrt(v))
    if ctx.mode == 2:
        v = x - ctx.c
        return sqrt(v if v > 0.0 else 0.0)
    v = ctx.c - x
    return -sqrt(v if v > 0.0 else 0.0)


cdef tuple _integrate(Ctx* ctx, double a, double b,
                      const double[::1] lo, const double[::1] hi, const int[::1] kind,
                      const double[::1] beta, const double[::1] coef,
                      const double[::1] xg, const double[::1] wg, double tol, int maxdepth):
    cdef Py_ssize_t npc = lo.shape[0], i, ne = 0, top = 0
    cdef double* pts = <double*>malloc((2 * npc + 2) * sizeof(double))
    cdef double* edges = <double*>malloc((2 * npc + 2) * sizeof(double))
    cdef double x, y, ref = 0.0, span, q, q1, q2, s, m, diff, allowed, floor_, total = 0.0, err = 0.0
    cdef double pa, pb
    cdef int depth, ok = 1
    cdef long n_eval = 0
    cdef Py_ssize_t cap
    cdef double* sa
    cdef double* sb
    cdef double* sq
    cdef int* sd
    cdef Py_ssize_t npts = 0
    try:
        for i in range(npc):
            if a < lo[i] < b:
                pts[npts] = lo[i]
                npts += 1
            if a < hi[i] < b:
                pts[npts] = hi[i]
                npts += 1
        qsort(pts, npts, sizeof(double), _cmp)
        edges[0] = _to_var(ctx, a, a, b)
        ne = 1
        for i in range(npts):
            y = _to_var(ctx, pts[i], a, b)
            if y > edges[ne - 1]:
                edges[ne] = y
                ne += 1
        y = _to_var(ctx, b, a, b)
        if y > edges[ne - 1]:
            edges[ne] = y
            ne += 1
        span = edges[ne - 1] - edges[0]
        cap = ne + maxdepth + 4
        sa = <double*>malloc(cap * sizeof(double))
        sb = <double*>malloc(cap * sizeof(double))
        sq = <double*>malloc(cap * sizeof(double))
        sd = <int*>malloc(cap * sizeof(int))
        try:
            # push panels right-to-left so the leftmost is processed first
            for i in range(ne - 2, -1, -1):
                q = _panel(ctx, edges[i], edges[i + 1], lo, hi, kind, beta, coef, xg, wg)
                n_eval += 1
                sa[top] = edges[i]
                sb[top] = edges[i + 1]
                sq[top] = q
                sd[top] = 0
                top += 1
            # the reference sums |q| left to right as the python version does
            for i in range(top - 1, -1, -1):
                ref += fabs(sq[i])
            if ref == 0.0 or span <= 0.0:
                return 0.0, 0.0, n_eval, True
            while top > 0:
                top -= 1
                pa = sa[top]
                pb = sb[top]
                q = sq[top]
                depth = sd[top]
                m = 0.5 * (pa + pb)
                q1 = _panel(ctx, pa, m, lo, hi, kind, beta, coef, xg, wg)
                q2 = _panel(ctx, m, pb, lo, hi, kind, beta, coef, xg, wg)
                n_eval += 2
                s = q1 + q2
                diff = fabs(s - q)
                allowed = tol * ref * (pb - pa) / span
                floor_ = 50.0 * _EPS * fabs(s)
                if allowed < floor_:
                    allowed = floor_
                if diff <= allowed or depth >= maxdepth:
                    if diff > allowed:
                        ok = 0
                    total += s
                    err += diff
                else:
                    sa[top] = m
                    sb[top] = pb
                    sq[top] = q2
                    sd[top] = depth + 1
                    top += 1
                    sa[top] = pa
                    sb[top] = m
                    sq[top] = q1
                    sd[top] = depth + 1
                    top += 1
            # panels that hit the depth cap are acceptable while the global error stays within budget
            return total, err, n_eval, bool(ok) or err <= tol * ref
        finally:
            free(sa)
            free(sb)
            free(sq)
            free(sd)
    finally:
        free(pts)
        free(edges)


def spherical_mean_raw(double r, double t, int d, double cd,
                       const double[::1] lo, const double[::1] hi, const int[::1] kind,
                       const double[::1] beta, const double[::1] coef,
                       const double[::1] xg, const double[::1] wg, double tol, int maxdepth):
    cdef Ctx ctx
    ctx.A = fabs(r - t)
    ctx.rt4 = 4.0 * r * t
    ctx.p = d - 2
    ctx.c = 0.0
    ctx.gamma = 0.0
    ctx.mode = 0 if d == 3 else 1
    val, err, n, ok = _integrate(&ctx, ctx.A, r + t, lo, hi, kind, beta, coef, xg, wg, tol, maxdepth)
    if d == 3:
        return cd * val / ctx.rt4, cd * err / ctx.rt4, n, ok
    return cd * val, cd * err, n, ok


def singular_integral_raw(double c, double a, double b, int side, double gamma,
                          const double[::1] lo, const double[::1] hi, const int[::1] kind,
                          const double[::1] beta, const double[::1] coef,
                          const double[::1] xg, const double[::1] wg, double tol, int maxdepth):
    if b <= a:
        return 0.0, 0.0, 0, True
    cdef Ctx ctx
    ctx.A = 0.0
    ctx.rt4 = 0.0
    ctx.p = 0
    ctx.c = c
    ctx.gamma = gamma
    ctx.mode = 2 if side > 0 else 3
    return _integrate(&ctx, a, b, lo, hi, kind, beta, coef, xg, wg, tol, maxdepth)
