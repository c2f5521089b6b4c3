# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; drop-in twin of ``_kernels_py``.

All loops run without the GIL so callers may fan out over threads.
"""

from libc.math cimport sqrt, fabs, pow
from libc.stdlib cimport malloc, free
from libc.float cimport DBL_EPSILON

import numpy as np

MODE_POTENTIAL = 0
MODE_AXIS = 1

cdef enum:
    C_OK = 0
    C_NOT_EXTERIOR = 1
    C_NO_CONVERGENCE = 2

STATUS_OK = C_OK
STATUS_NOT_EXTERIOR = C_NOT_EXTERIOR
STATUS_NO_CONVERGENCE = C_NO_CONVERGENCE

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]

XGK[:] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
WGK[:] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
WG[:] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]


cdef struct Params:
    int n
    const double* a2
    const double* x2
    double lower
    double scale
    int mode
    int index


cdef inline double integrand(double w, const Params* p) noexcept nogil:
    cdef double w2 = w * w
    cdef double t = p.lower + p.scale * (1.0 - w2) / w2
    cdef double jac = 2.0 * p.scale / (w2 * w)
    cdef double prod = 1.0
    cdef double s = 0.0
    cdef double d
    cdef int i
    for i in range(p.n):
        d = p.a2[i] + t
        prod *= p.a2[i] / d
        if p.mode == 0:
            s += p.x2[i] / d
    if p.mode == 0:
        return 0.25 * sqrt(prod) * (1.0 - s) * jac
    return sqrt(prod) / (p.a2[p.index] + t) * jac


cdef inline void gk15(const Params* p, double a, double b,
                      double* kval, double* err) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = integrand(c, p)
    cdef double k = WGK[7] * fc
    cdef double g = WG[3] * fc
    cdef double f1, f2
    cdef int j
    for j in range(7):
        f1 = integrand(c - h * XGK[j], p)
        f2 = integrand(c + h * XGK[j], p)
        k += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            g += WG[j // 2] * (f1 + f2)
    kval[0] = h * k
    err[0] = fabs(h * (k - g))


cdef int initial_edges(double* cuts, int m, double* edges) noexcept nogil:
    """Mesh of [0, 1] from ``m`` cut points (sorted in place); see the Python twin."""
    cdef int i, j, count = 1
    cdef double c
    for i in range(1, m):
        c = cuts[i]
        j = i - 1
        while j >= 0 and cuts[j] > c:
            cuts[j + 1] = cuts[j]
            j -= 1
        cuts[j + 1] = c
    edges[0] = 0.0
    for i in range(m):
        if 0.0 < cuts[i] < 1.0 and cuts[i] - edges[count - 1] > 1e-12:
            edges[count] = cuts[i]
            count += 1
    if count > 1 and 1.0 - edges[count - 1] <= 1e-12:
        count -= 1
    edges[count] = 1.0
    return count


cdef int adaptive(const Params* p, double* cuts, int ncuts,
                  double rel_tol, double abs_tol, int max_sub,
                  double* value, double* error, long* evals) noexcept nogil:
    """Returns 1 when converged, 0 when the budget ran out, -1 on OOM."""
    cdef int cap = max_sub if max_sub > ncuts + 1 else ncuts + 1
    cdef double* lo = <double*> malloc(cap * sizeof(double))
    cdef double* hi = <double*> malloc(cap * sizeof(double))
    cdef double* val = <double*> malloc(cap * sizeof(double))
    cdef double* err = <double*> malloc(cap * sizeof(double))
    cdef char* frozen = <char*> malloc(cap * sizeof(char))
    cdef double* edges = <double*> malloc((ncuts + 2) * sizeof(double))
    cdef int n, i, worst, converged = 0
    cdef double total, etotal, mid, k1, e1, k2, e2, emax, tol
    if lo == NULL or hi == NULL or val == NULL or err == NULL or frozen == NULL or edges == NULL:
        free(lo); free(hi); free(val); free(err); free(frozen); free(edges)
        return -1
    n = initial_edges(cuts, ncuts, edges)
    total = 0.0
    etotal = 0.0
    for i in range(n):
        lo[i] = edges[i]
        hi[i] = edges[i + 1]
        frozen[i] = 0
        gk15(p, lo[i], hi[i], &val[i], &err[i])
        total += val[i]
        etotal += err[i]
    free(edges)
    evals[0] = 15 * n
    while True:
        tol = rel_tol * fabs(total)
        if tol < abs_tol:
            tol = abs_tol
        if etotal <= tol:
            converged = 1
            break
        if n >= max_sub:
            break
        worst = -1
        emax = -1.0
        for i in range(n):
            if not frozen[i] and err[i] > emax:
                emax = err[i]
                worst = i
        if worst < 0:
            break
        mid = 0.5 * (lo[worst] + hi[worst])
        if not (lo[worst] < mid and mid < hi[worst]) or \
                (hi[worst] - lo[worst]) <= 4.0 * DBL_EPSILON * fabs(hi[worst]):
            frozen[worst] = 1
            continue
        gk15(p, lo[worst], mid, &k1, &e1)
        gk15(p, mid, hi[worst], &k2, &e2)
        evals[0] += 30
        total += k1 + k2 - val[worst]
        etotal += e1 + e2 - err[worst]
        lo[n] = mid
        hi[n] = hi[worst]
        val[n] = k2
        err[n] = e2
        frozen[n] = 0
        hi[worst] = mid
        val[worst] = k1
        err[worst] = e1
        n += 1
    # resum to shed drift from the running updates
    total = 0.0
    etotal = 0.0
    for i in range(n):
        total += val[i]
        etotal += err[i]
    value[0] = total
    error[0] = etotal
    free(lo); free(hi); free(val); free(err); free(frozen)
    return converged


def ellipsoid_tail(a2, x2, double lower, int mode, int index,
                   double rel_tol, double abs_tol, int max_subdivisions):
    """Same contract as ``_kernels_py.ellipsoid_tail``."""
    cdef double[::1] a2v = np.ascontiguousarray(a2, dtype=np.float64)
    cdef double[::1] x2v = np.ascontiguousarray(x2, dtype=np.float64)
    cdef Params p
    cdef double amin
    cdef double* cuts
    cdef double value = 0.0, error = 0.0
    cdef long evals = 0
    cdef int i, status
    if a2v.shape[0] != x2v.shape[0]:
        raise ValueError("a2 and x2 must have equal length")
    if not (0 <= index < a2v.shape[0]):
        raise IndexError("axis index out of range")
    if max_subdivisions < 1:
        raise ValueError("max_subdivisions must be >= 1")
    amin = a2v[0]
    for i in range(a2v.shape[0]):
        if a2v[i] < amin:
            amin = a2v[i]
    p.n = a2v.shape[0]
    p.a2 = &a2v[0]
    p.x2 = &x2v[0]
    p.lower = lower
    # smallest bend sets the scale, the others become mesh cuts
    p.scale = lower + amin
    p.mode = mode
    p.index = index
    cuts = <double*> malloc(p.n * sizeof(double))
    if cuts == NULL:
        raise MemoryError()
    for i in range(p.n):
        cuts[i] = sqrt(p.scale / (p.scale + a2v[i]))
    with nogil:
        status = adaptive(&p, cuts, p.n, rel_tol, abs_tol, max_subdivisions, &value, &error, &evals)
    free(cuts)
    if status < 0:
        raise MemoryError()
    return value, error, evals, bool(status)


cdef double level_minus_one(const double* a2, const double* x2, int n, double tau,
                            double* deriv) noexcept nogil:
    cdef double f = -1.0, fp = 0.0, q
    cdef int i
    for i in range(n):
        q = x2[i] / (a2[i] + tau)
        f += q
        fp -= q / (a2[i] + tau)
    deriv[0] = fp
    return f


def solve_tau(a2, x2, double tol, int max_iter):
    """Same contract as ``_kernels_py.solve_tau``."""
    cdef double[::1] a2v = np.ascontiguousarray(a2, dtype=np.float64)
    cdef double[::1] x2v = np.ascontiguousarray(x2, dtype=np.float64)
    cdef int n = a2v.shape[0], i, it
    cdef double r2 = 0.0, amax = 0.0, amin = 1e308, f, fp, lo, hi, tau, new, dummy, floor
    cdef int status = C_NO_CONVERGENCE
    for i in range(n):
        r2 += x2v[i]
        if a2v[i] > amax:
            amax = a2v[i]
        if a2v[i] < amin:
            amin = a2v[i]
    f = level_minus_one(&a2v[0], &x2v[0], n, 0.0, &dummy)
    if not f > 0.0:
        return 0.0, 0, C_NOT_EXTERIOR
    lo = r2 - amax
    if lo < 0.0:
        lo = 0.0
    hi = r2 - amin
    tau = lo
    it = 0
    with nogil:
        while it < max_iter:
            it += 1
            f = level_minus_one(&a2v[0], &x2v[0], n, tau, &fp)
            if fabs(f) <= 8.0 * DBL_EPSILON:
                # at the rounding level of f; Newton would only dither from here
                status = C_OK if fabs(f) <= tol else C_NO_CONVERGENCE
                break
            if f > 0.0:
                lo = tau
            else:
                hi = tau
            new = tau - f / fp
            if not (lo <= new and new <= hi):
                new = 0.5 * (lo + hi)
            # rounding floor for steps: f varies on the scale of a2 + tau
            floor = 4.0 * DBL_EPSILON * (new + amin)
            if fabs(new - tau) <= floor:
                tau = new
                status = -1
                break
            tau = new
            if hi - lo <= floor:
                status = -1
                break
        if status == -1:
            f = level_minus_one(&a2v[0], &x2v[0], n, tau, &dummy)
            status = C_OK if fabs(f) <= tol else C_NO_CONVERGENCE
    return tau, it, status


cdef double rf_c(double x, double y, double z) noexcept nogil:
    cdef double a0 = (x + y + z) / 3.0
    cdef double q = fabs(a0 - x)
    if fabs(a0 - y) > q:
        q = fabs(a0 - y)
    if fabs(a0 - z) > q:
        q = fabs(a0 - z)
    q *= pow(3.0 * DBL_EPSILON, -1.0 / 6.0)
    cdef double xn = x, yn = y, zn = z, an = a0, f = 1.0, sx, sy, sz, lam
    while f * q >= fabs(an):
        sx = sqrt(xn)
        sy = sqrt(yn)
        sz = sqrt(zn)
        lam = sx * sy + sx * sz + sy * sz
        xn = 0.25 * (xn + lam)
        yn = 0.25 * (yn + lam)
        zn = 0.25 * (zn + lam)
        an = 0.25 * (an + lam)
        f *= 0.25
    cdef double X = (a0 - x) * f / an
    cdef double Y = (a0 - y) * f / an
    cdef double Z = -(X + Y)
    cdef double e2 = X * Y - Z * Z
    cdef double e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
            - 3.0 * e2 * e3 / 44.0) / sqrt(an)


cdef double rd_c(double x, double y, double z) noexcept nogil:
    cdef double a0 = (x + y + 3.0 * z) / 5.0
    cdef double q = fabs(a0 - x)
    if fabs(a0 - y) > q:
        q = fabs(a0 - y)
    if fabs(a0 - z) > q:
        q = fabs(a0 - z)
    q *= pow(0.25 * DBL_EPSILON, -1.0 / 6.0)
    cdef double xn = x, yn = y, zn = z, an = a0, f = 1.0, acc = 0.0, sx, sy, sz, lam
    while f * q >= fabs(an):
        sx = sqrt(xn)
        sy = sqrt(yn)
        sz = sqrt(zn)
        lam = sx * sy + sx * sz + sy * sz
        acc += f / (sz * (zn + lam))
        xn = 0.25 * (xn + lam)
        yn = 0.25 * (yn + lam)
        zn = 0.25 * (zn + lam)
        an = 0.25 * (an + lam)
        f *= 0.25
    cdef double X = (a0 - x) * f / an
    cdef double Y = (a0 - y) * f / an
    cdef double Z = -(X + Y) / 3.0
    cdef double xy = X * Y
    cdef double z2 = Z * Z
    cdef double e2 = xy - 6.0 * z2
    cdef double e3 = (3.0 * xy - 8.0 * z2) * Z
    cdef double e4 = 3.0 * (xy - z2) * z2
    cdef double e5 = xy * z2 * Z
    cdef double series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
                          - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return f * series / (an * sqrt(an)) + 3.0 * acc


def carlson_rf(double x, double y, double z):
    return rf_c(x, y, z)


def carlson_rd(double x, double y, double z):
    return rd_c(x, y, z)
