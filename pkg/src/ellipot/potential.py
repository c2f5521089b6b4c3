"""Newtonian potential of a homogeneous ellipsoid and its gradient.

For unit density on an ellipsoid with semi-axes ``a``,

    N(x) = 1/4 * int_{tau(x)}^inf gamma_t * (1 - sum x_i^2/(a_i^2+t)) dt,

with ``tau(x) = 0`` on the closed body.  Differentiating under the integral
(the boundary term vanishes because the integrand is zero at ``tau``) gives

    dN/dx_i = -x_i/2 * int_{tau(x)}^inf gamma_t / (a_i^2+t) dt.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import (
    DimensionNotThree,
    DimensionTooSmall,
    InvalidGravityConfig,
    ScaleNotGreaterThanOne,
    ToleranceNotMet,
)
from .geometry import (
    DEFAULT_BOUNDARY_TOL,
    Ellipsoid,
    PointClassification,
    as_point,
    classify_point,
)
from .quadrature import IntegralResult, QuadratureConfig


def sphere_surface(n: int) -> float:
    """Surface measure of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def kernel_constant(n: int) -> float:
    """``1 / ((n-2) * |S^{n-1}|)``, normalising ``|x|^(2-n)`` for ``-Laplacian``."""
    if int(n) != n or n < 3:
        raise DimensionTooSmall(f"kernel constant needs N >= 3, got {n}")
    return 1.0 / ((n - 2) * sphere_surface(int(n)))


@dataclass(frozen=True)
class PotentialValue:
    value: float
    point_class: PointClassification
    quadrature: IntegralResult


@dataclass(frozen=True)
class FieldValue:
    gradient: np.ndarray
    point_class: PointClassification
    quadrature: tuple[IntegralResult, ...]

    @property
    def converged(self) -> bool:
        return all(q.converged for q in self.quadrature)

    @property
    def error_estimate(self) -> float:
        return max((q.error_estimate for q in self.quadrature), default=0.0)


@dataclass(frozen=True)
class GravityConfig:
    """Gravitational constant plus exactly one of density or total mass."""

    G: float
    rho: float | None = None
    total_mass: float | None = None

    def __post_init__(self):
        if not (self.G > 0 and math.isfinite(self.G)):
            raise InvalidGravityConfig("G must be positive")
        if (self.rho is None) == (self.total_mass is None):
            raise InvalidGravityConfig("give exactly one of rho or total_mass")
        v = self.rho if self.rho is not None else self.total_mass
        if not (v > 0 and math.isfinite(v)):
            raise InvalidGravityConfig("rho / total_mass must be positive")

    def density(self, e: Ellipsoid) -> float:
        if self.rho is not None:
            return self.rho
        return self.total_mass / e.volume()


def _tail(e: Ellipsoid, x2: np.ndarray, lower: float, mode: int, index: int,
          cfg: QuadratureConfig) -> IntegralResult:
    value, err, evals, ok = _backend.kernels.ellipsoid_tail(
        e.axes2, x2, lower, mode, index, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions
    )
    if not ok:
        warnings.warn(
            f"quadrature tolerance not met for axes={e.semi_axes}: "
            f"value={value!r}, error={err:.3g}",
            ToleranceNotMet,
            stacklevel=3,
        )
    return IntegralResult(float(value), float(err), int(evals), bool(ok))


def axis_integral(e: Ellipsoid, index: int, lower: float = 0.0,
                  cfg: QuadratureConfig | None = None) -> IntegralResult:
    """``int_lower^inf gamma_t / (a_index^2 + t) dt``."""
    cfg = cfg or QuadratureConfig()
    return _tail(e, np.zeros(e.dim), lower, _backend.MODE_AXIS, index, cfg)


def potential_at(e: Ellipsoid, x, cfg: QuadratureConfig | None = None,
                 boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> PotentialValue:
    cfg = cfg or QuadratureConfig()
    p = as_point(e, x)
    pc = classify_point(e, p, boundary_tol)
    q = _tail(e, p * p, pc.tau, _backend.MODE_POTENTIAL, 0, cfg)
    return PotentialValue(q.value, pc, q)


def evaluate_field(e: Ellipsoid, x, cfg: QuadratureConfig | None = None,
                   boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> FieldValue:
    cfg = cfg or QuadratureConfig()
    p = as_point(e, x)
    pc = classify_point(e, p, boundary_tol)
    grad = np.zeros(e.dim)
    results = []
    for i in range(e.dim):
        if p[i] == 0.0:
            continue
        q = axis_integral(e, i, pc.tau, cfg)
        grad[i] = -0.5 * p[i] * q.value
        results.append(q)
    return FieldValue(grad, pc, tuple(results))


def field_at(e: Ellipsoid, x, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Gradient of the unit-density potential at ``x``."""
    return evaluate_field(e, x, cfg).gradient


def _check_scale(scale: float) -> None:
    if not (scale > 1.0 and math.isfinite(scale)):
        raise ScaleNotGreaterThanOne(f"shell scale must exceed 1, got {scale}")


def hollow_shell_potential(e: Ellipsoid, scale: float, x,
                           cfg: QuadratureConfig | None = None) -> float:
    """Potential of ``scale*E minus E`` at unit density, by linearity."""
    _check_scale(scale)
    return potential_at(e.scaled(scale), x, cfg).value - potential_at(e, x, cfg).value


def hollow_shell_field(e: Ellipsoid, scale: float, x,
                       cfg: QuadratureConfig | None = None) -> np.ndarray:
    _check_scale(scale)
    return field_at(e.scaled(scale), x, cfg) - field_at(e, x, cfg)


def gravitational_potential(e: Ellipsoid, g: GravityConfig, x,
                            cfg: QuadratureConfig | None = None) -> float:
    """``4 pi G rho N(x)``; positive convention, ``G M / |x|`` far away."""
    if e.dim != 3:
        raise DimensionNotThree(f"gravity is defined for N = 3, got N = {e.dim}")
    return 4.0 * math.pi * g.G * g.density(e) * potential_at(e, x, cfg).value


def sphere_potential_exact(radius: float, r: float) -> float:
    """Closed form for the unit-density ball in R^3 (test and CLI reference)."""
    if r <= radius:
        return (3.0 * radius**2 - r * r) / 6.0
    return radius**3 / (3.0 * r)
