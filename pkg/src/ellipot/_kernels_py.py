"""Pure-Python (numpy) kernels.

Reference implementation of the hot loops; ``_kernels.pyx`` mirrors every
function here with the same signature and is preferred when compiled.
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import adaptive_gk15, tail_map

MODE_POTENTIAL = 0
MODE_AXIS = 1

STATUS_OK = 0
STATUS_NOT_EXTERIOR = 1
STATUS_NO_CONVERGENCE = 2

_EPS = np.finfo(float).eps


def _integrand(a2, x2, mode, index):
    a2c = a2[:, None]

    if mode == MODE_POTENTIAL:
        x2c = x2[:, None]

        def f(t):
            d = a2c + t[None, :]
            g = np.sqrt(np.prod(a2c / d, axis=0))
            return 0.25 * g * (1.0 - np.sum(x2c / d, axis=0))

    else:
        ai2 = a2[index]

        def f(t):
            d = a2c + t[None, :]
            g = np.sqrt(np.prod(a2c / d, axis=0))
            return g / (ai2 + t)

    return f


def ellipsoid_tail(a2, x2, lower, mode, index, rel_tol, abs_tol, max_subdivisions):
    """Integral over ``[lower, inf)`` of an ellipsoid integrand.

    ``mode == MODE_POTENTIAL``: ``gamma_t * (1 - sum x_i^2/(a_i^2+t)) / 4``.
    ``mode == MODE_AXIS``: ``gamma_t / (a_index^2 + t)``.
    ``a2`` and ``x2`` hold squared semi-axes and squared coordinates.

    Returns ``(value, error, evaluations, converged)``.
    """
    a2 = np.ascontiguousarray(a2, dtype=float)
    x2 = np.ascontiguousarray(x2, dtype=float)
    scale, breaks = map_scale(a2, lower)
    g = tail_map(_integrand(a2, x2, mode, index), float(lower), scale, "sqrt")
    return adaptive_gk15(g, 0.0, 1.0, rel_tol, abs_tol, int(max_subdivisions), breaks)


def map_scale(a2, lower):
    """Map scale and mesh cuts for an ellipsoid integrand.

    The integrand bends where ``t - lower`` passes each ``a_i^2``.  The
    smallest of these sets the scale; the others become cut points
    ``w_i = sqrt(s / (s + a_i^2))`` so extreme aspect ratios are resolved.
    """
    scale = float(lower) + float(min(a2))
    return scale, [math.sqrt(scale / (scale + float(v))) for v in a2]


def solve_tau(a2, x2, tol, max_iter):
    """Root of ``sum x2/(a2+tau) = 1`` by safeguarded Newton.

    Returns ``(tau, iterations, status)``.
    """
    a2 = [float(v) for v in a2]
    x2 = [float(v) for v in x2]
    r2 = math.fsum(x2)
    f0 = math.fsum(xi / ai for xi, ai in zip(x2, a2)) - 1.0
    if not f0 > 0.0:
        return 0.0, 0, STATUS_NOT_EXTERIOR
    # sum x2/(a2+t) >= 1 at t = r2 - max(a2) and <= 1 at t = r2 - min(a2)
    lo = max(0.0, r2 - max(a2))
    hi = r2 - min(a2)
    tau = lo
    # rounding floor for steps: f varies on the scale of a2 + tau
    amin = min(a2)
    for it in range(1, max_iter + 1):
        f = -1.0
        fp = 0.0
        for xi, ai in zip(x2, a2):
            q = xi / (ai + tau)
            f += q
            fp -= q / (ai + tau)
        if abs(f) <= 8.0 * _EPS:
            # at the rounding level of f; Newton would only dither from here
            return tau, it, STATUS_OK if abs(f) <= tol else STATUS_NO_CONVERGENCE
        if f > 0.0:
            lo = tau
        else:
            hi = tau
        step = -f / fp
        new = tau + step
        if not (lo <= new <= hi):
            new = 0.5 * (lo + hi)
        floor = 4.0 * _EPS * (new + amin)
        if abs(new - tau) <= floor:
            return _finish(a2, x2, new, tol, it)
        tau = new
        if hi - lo <= floor:
            return _finish(a2, x2, tau, tol, it)
    return tau, max_iter, STATUS_NO_CONVERGENCE


def _finish(a2, x2, tau, tol, it):
    f = math.fsum(xi / (ai + tau) for xi, ai in zip(x2, a2)) - 1.0
    status = STATUS_OK if abs(f) <= tol else STATUS_NO_CONVERGENCE
    return tau, it, status


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F by duplication."""
    a0 = (x + y + z) / 3.0
    q = (3.0 * _EPS) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    xn, yn, zn, an = x, y, z, a0
    f = 1.0
    while f * q >= abs(an):
        sx, sy, sz = math.sqrt(xn), math.sqrt(yn), math.sqrt(zn)
        lam = sx * sy + sx * sz + sy * sz
        xn = 0.25 * (xn + lam)
        yn = 0.25 * (yn + lam)
        zn = 0.25 * (zn + lam)
        an = 0.25 * (an + lam)
        f *= 0.25
    X = (a0 - x) * f / an
    Y = (a0 - y) * f / an
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (
        1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    ) / math.sqrt(an)


def carlson_rd(x, y, z):
    """Carlson's R_D(x, y, z) = R_J(x, y, z, z) by duplication."""
    a0 = (x + y + 3.0 * z) / 5.0
    q = (0.25 * _EPS) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    xn, yn, zn, an = x, y, z, a0
    f = 1.0
    acc = 0.0
    while f * q >= abs(an):
        sx, sy, sz = math.sqrt(xn), math.sqrt(yn), math.sqrt(zn)
        lam = sx * sy + sx * sz + sy * sz
        acc += f / (sz * (zn + lam))
        xn = 0.25 * (xn + lam)
        yn = 0.25 * (yn + lam)
        zn = 0.25 * (zn + lam)
        an = 0.25 * (an + lam)
        f *= 0.25
    X = (a0 - x) * f / an
    Y = (a0 - y) * f / an
    Z = -(X + Y) / 3.0
    xy = X * Y
    z2 = Z * Z
    e2 = xy - 6.0 * z2
    e3 = (3.0 * xy - 8.0 * z2) * Z
    e4 = 3.0 * (xy - z2) * z2
    e5 = xy * z2 * Z
    series = (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
    )
    return f * series / (an * math.sqrt(an)) + 3.0 * acc
