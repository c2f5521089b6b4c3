"""Demagnetizing tensor of a uniformly magnetized ellipsoid in R^3.

The factors are

    P_i = 1/2 * int_0^inf gamma_t / (a_i^2 + t) dt,

computed by quadrature (:func:`demag_factors_integral`, the reference),
through Carlson's ``R_D`` (:func:`demag_factors_carlson`), or through the
Legendre-form closed expressions for triaxial bodies and spheroids.  Every
closed form is checked against the quadrature in the test-suite.

The closed forms, each checked against the integral:

* triaxial, ``a1 > a2 > a3``, ``k^2 = (a1^2-a2^2)/(a1^2-a3^2)``,
  ``theta = arccos(a3/a1)``::

      P1 = a1 a2 a3 (F - E) / ((a1^2-a2^2) sqrt(a1^2-a3^2))
      P3 = a2/(a2^2-a3^2) * (a2 - a1 a3 E / sqrt(a1^2-a3^2))
      P2 = 1 - P1 - P3

* prolate ``a1 > a2 = a3``: ``P1 = a3^2/c^3 (a1 arccoth(a1/c) - c)``,
  ``c = sqrt(a1^2-a3^2)``.
* oblate ``a1 = a2 > a3``: ``P3 = a1^2/c^3 (c - a3 arctan(c/a3))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import (
    DegenerateAxes,
    DimensionNotThree,
    NotInterior,
    NotOblate,
    NotProlate,
    ParameterOutOfRange,
)
from .geometry import Ellipsoid, level_value
from .potential import axis_integral
from .quadrature import IntegralResult, QuadratureConfig, adaptive_gk15

DEGENERACY_RTOL = 1e-8
# below this eccentricity-like ratio the spheroid forms switch to series
_SERIES_CUTOFF = 0.05


@dataclass(frozen=True)
class DemagTensor:
    factors: tuple[float, float, float]
    axes: tuple[float, float, float] | None = None
    quadrature: tuple[IntegralResult, ...] = field(default=(), compare=False, repr=False)

    @property
    def trace(self) -> float:
        return math.fsum(self.factors)

    @property
    def converged(self) -> bool:
        return all(q.converged for q in self.quadrature)

    def matrix(self) -> np.ndarray:
        return np.diag(self.factors)


@dataclass(frozen=True)
class Magnetization:
    m: tuple[float, float, float]

    def __post_init__(self):
        m = tuple(float(v) for v in self.m)
        if len(m) != 3 or not all(math.isfinite(v) for v in m):
            raise ValueError(f"magnetization must be a finite 3-vector, got {self.m}")
        object.__setattr__(self, "m", m)


def _require_3d(e: Ellipsoid) -> None:
    if e.dim != 3:
        raise DimensionNotThree(f"demagnetizing factors need N = 3, got N = {e.dim}")


def demag_factors_integral(e: Ellipsoid, cfg: QuadratureConfig | None = None) -> DemagTensor:
    _require_3d(e)
    qs = tuple(axis_integral(e, i, 0.0, cfg) for i in range(3))
    factors = tuple(0.5 * q.value for q in qs)
    return DemagTensor(factors, e.semi_axes, qs)


def demag_factors_carlson(e: Ellipsoid) -> DemagTensor:
    """``P_i = a1 a2 a3 / 3 * R_D(a_j^2, a_k^2, a_i^2)``."""
    _require_3d(e)
    a2 = e.axes2.tolist()
    pref = math.prod(e.semi_axes) / 3.0
    rd = _backend.kernels.carlson_rd
    factors = tuple(
        pref * rd(a2[(i + 1) % 3], a2[(i + 2) % 3], a2[i]) for i in range(3)
    )
    return DemagTensor(factors, e.semi_axes)


# -- elliptic integrals -----------------------------------------------------


def _check_parameter(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise ParameterOutOfRange(f"parameter must lie in [0, 1], got {p}")


def _reduce(y: float) -> tuple[int, float]:
    """``y = j*pi + r`` with ``|r| <= pi/2``."""
    j = round(y / math.pi)
    return j, y - j * math.pi


def _e_first_quadrant(phi: float, p: float) -> float:
    if p == 1.0:
        return math.sin(phi)
    s, c = math.sin(phi), math.cos(phi)
    k = _backend.kernels
    d = 1.0 - p * s * s
    return s * k.carlson_rf(c * c, d, 1.0) - p * s**3 / 3.0 * k.carlson_rd(c * c, d, 1.0)


def _e_quadrature(y: float, p: float, rel_tol: float) -> float:
    def f(theta):
        return np.sqrt(1.0 - p * np.sin(theta) ** 2)

    value, _, _, _ = adaptive_gk15(f, 0.0, y, rel_tol, 1e-300, 500)
    return value


def elliptic_e_incomplete(y: float, p: float, method: str = "carlson", rel_tol: float = 1e-14) -> float:
    """``E(y|p) = int_0^y sqrt(1 - p sin^2 theta) dtheta``, parameter convention.

    ``method="quadrature"`` integrates the definition directly.
    """
    _check_parameter(p)
    if not math.isfinite(y):
        raise ValueError("amplitude must be finite")
    if p == 0.0:
        return float(y)
    j, r = _reduce(y)
    if method == "carlson":
        part = math.copysign(_e_first_quadrant(abs(r), p), r)
        whole = _e_first_quadrant(math.pi / 2, p) if j else 0.0
    elif method == "quadrature":
        part = math.copysign(_e_quadrature(abs(r), p, rel_tol), r) if r else 0.0
        whole = _e_quadrature(math.pi / 2, p, rel_tol) if j else 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    return 2 * j * whole + part


def elliptic_f_incomplete(y: float, p: float) -> float:
    """``F(y|p) = int_0^y (1 - p sin^2 theta)^(-1/2) dtheta``."""
    _check_parameter(p)
    if p == 0.0:
        return float(y)
    j, r = _reduce(y)
    if p == 1.0 and (j or abs(abs(r) - math.pi / 2) < 1e-300):
        return math.copysign(math.inf, y)

    def first(phi):
        s, c = math.sin(phi), math.cos(phi)
        return s * _backend.kernels.carlson_rf(c * c, 1.0 - p * s * s, 1.0)

    whole = first(math.pi / 2) if j else 0.0
    return 2 * j * whole + math.copysign(first(abs(r)), r)


# -- closed forms -------------------------------------------------------------


def _order_desc(axes):
    order = sorted(range(3), key=lambda i: -axes[i])
    return order, [axes[i] for i in order]


def _unsort(order, sorted_factors):
    out = [0.0, 0.0, 0.0]
    for pos, i in enumerate(order):
        out[i] = sorted_factors[pos]
    return tuple(out)


def _close(u: float, v: float) -> bool:
    return abs(u - v) <= DEGENERACY_RTOL * max(abs(u), abs(v))


def demag_closed_triaxial(e: Ellipsoid) -> DemagTensor:
    """Legendre-form factors of a general ellipsoid; axes in any order."""
    _require_3d(e)
    order, (a1, a2, a3) = _order_desc(e.semi_axes)
    if _close(a1, a2) or _close(a2, a3):
        raise DegenerateAxes(f"axes {e.semi_axes} have equal pairs; use spheroid forms")
    d12 = (a1 - a2) * (a1 + a2)
    d13 = (a1 - a3) * (a1 + a3)
    d23 = (a2 - a3) * (a2 + a3)
    s13 = math.sqrt(d13)
    theta = math.atan2(s13, a3)
    k2 = d12 / d13
    ee = elliptic_e_incomplete(theta, k2)
    ff = elliptic_f_incomplete(theta, k2)
    p1 = a1 * a2 * a3 * (ff - ee) / (d12 * s13)
    p3 = a2 / d23 * (a2 - a1 * a3 * ee / s13)
    p2 = 1.0 - p1 - p3
    return DemagTensor(_unsort(order, (p1, p2, p3)), e.semi_axes)


def _prolate_long(a1: float, a3: float) -> float:
    c = math.sqrt((a1 - a3) * (a1 + a3))
    ecc = c / a1
    one_minus_e2 = (a3 / a1) ** 2
    if ecc < _SERIES_CUTOFF:
        # (artanh e - e)/e^3 = sum_k e^(2k)/(2k+3)
        e2 = ecc * ecc
        total, term, k = 0.0, 1.0, 0
        while True:
            piece = term / (2 * k + 3)
            total += piece
            if piece < 1e-18 * total:
                break
            term *= e2
            k += 1
        return one_minus_e2 * total
    one_minus_e = one_minus_e2 / (1.0 + ecc)
    artanh = 0.5 * math.log1p(2.0 * ecc / one_minus_e)
    return one_minus_e2 * (artanh - ecc) / ecc**3


def _oblate_short(a1: float, a3: float) -> float:
    c = math.sqrt((a1 - a3) * (a1 + a3))
    g = c / a3
    if g < _SERIES_CUTOFF:
        # (g - arctan g)/g^3 = sum_k (-1)^k g^(2k)/(2k+3)
        g2 = g * g
        total, term, k = 0.0, 1.0, 0
        while True:
            piece = term / (2 * k + 3)
            total += piece
            if abs(piece) < 1e-18 * abs(total):
                break
            term *= -g2
            k += 1
        return (1.0 + g2) * total
    # c + a3 arctan(a3/c) - a3 pi/2 == c - a3 arctan(c/a3)
    return a1 * a1 / c**3 * (c - a3 * math.atan(g))


def demag_prolate(a1: float, a3: float) -> DemagTensor:
    """Cigar ``a1 > a2 = a3``; factors in order ``(long, short, short)``."""
    if not (a3 > 0 and a1 > a3 and math.isfinite(a1)):
        raise NotProlate(f"need a1 > a3 > 0, got a1={a1}, a3={a3}")
    p1 = _prolate_long(a1, a3)
    p2 = 0.5 * (1.0 - p1)
    return DemagTensor((p1, p2, p2), (a1, a3, a3))


def demag_oblate(a1: float, a3: float) -> DemagTensor:
    """Disc ``a1 = a2 > a3``; factors in order ``(long, long, short)``."""
    if not (a3 > 0 and a1 > a3 and math.isfinite(a1)):
        raise NotOblate(f"need a1 > a3 > 0, got a1={a1}, a3={a3}")
    p3 = _oblate_short(a1, a3)
    p1 = 0.5 * (1.0 - p3)
    return DemagTensor((p1, p1, p3), (a1, a1, a3))


def demag_factors(e: Ellipsoid, method: str = "auto", cfg: QuadratureConfig | None = None) -> DemagTensor:
    """Dispatch between evaluation routes.

    ``"auto"`` uses the spheroid or sphere forms when two axes agree within
    ``DEGENERACY_RTOL`` and Carlson's ``R_D`` otherwise, which stays accurate
    in the near-degenerate cases where the Legendre forms cancel.
    """
    _require_3d(e)
    if method == "integral":
        return demag_factors_integral(e, cfg)
    if method == "carlson":
        return demag_factors_carlson(e)
    if method == "triaxial":
        return demag_closed_triaxial(e)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    order, (a1, a2, a3) = _order_desc(e.semi_axes)
    eq12, eq23 = _close(a1, a2), _close(a2, a3)
    if eq12 and eq23:
        third = 1.0 / 3.0
        return DemagTensor((third, third, third), e.semi_axes)
    if eq23:
        f = demag_prolate(a1, a3).factors
    elif eq12:
        f = demag_oblate(a1, a3).factors
    else:
        return demag_factors_carlson(e)
    return DemagTensor(_unsort(order, f), e.semi_axes)


# -- uniform magnetization --------------------------------------------------


def stray_field(P: DemagTensor, m: Magnetization) -> np.ndarray:
    """Interior demagnetizing field ``-P m``."""
    return -np.asarray(P.factors) * np.asarray(m.m)


def magnetostatic_potential(P: DemagTensor, m: Magnetization, x) -> float:
    """``P x . m``, valid inside the body that produced ``P``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != 3:
        raise ValueError("point must have 3 coordinates")
    if P.axes is not None and level_value(Ellipsoid(P.axes), x) >= 1.0:
        raise NotInterior(f"point {x.tolist()} is not inside the ellipsoid {P.axes}")
    return float(np.dot(np.asarray(P.factors) * x, m.m))
