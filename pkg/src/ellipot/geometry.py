"""Axis-aligned ellipsoids in R^N and their confocal family.

The confocal ellipsoid with parameter ``t >= 0`` has squared semi-axes
``a_i**2 + t``.  Every exterior point lies on exactly one of them; that
parameter is ``tau(x)`` and it is the lower limit of the potential integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import _backend
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    NegativeParameter,
    NoConvergence,
    NonPositiveAxis,
    NotExterior,
)

DEFAULT_BOUNDARY_TOL = 1e-9
DEFAULT_TAU_TOL = 1e-12
DEFAULT_TAU_MAX_ITER = 200


@dataclass(frozen=True)
class Ellipsoid:
    semi_axes: tuple[float, ...]

    def __post_init__(self):
        axes = tuple(float(a) for a in self.semi_axes)
        if len(axes) < 3:
            raise DimensionTooSmall(f"need at least 3 semi-axes, got {len(axes)}")
        for a in axes:
            if not (math.isfinite(a) and a > 0.0):
                raise NonPositiveAxis(f"semi-axes must be positive and finite, got {axes}")
        object.__setattr__(self, "semi_axes", axes)

    @property
    def dim(self) -> int:
        return len(self.semi_axes)

    @property
    def axes(self) -> np.ndarray:
        return np.array(self.semi_axes)

    @property
    def axes2(self) -> np.ndarray:
        a = self.axes
        return a * a

    def volume(self) -> float:
        n = self.dim
        return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * math.prod(self.semi_axes)

    def scaled(self, factor: float) -> "Ellipsoid":
        return Ellipsoid(tuple(factor * a for a in self.semi_axes))

    def is_sphere(self) -> bool:
        return len(set(self.semi_axes)) == 1


class PointKind(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class PointClassification:
    kind: PointKind
    tau: float = 0.0


def make_ellipsoid(semi_axes: Sequence[float]) -> Ellipsoid:
    """Validated constructor; raises NonPositiveAxis or DimensionTooSmall."""
    return Ellipsoid(tuple(semi_axes))


def as_point(e: Ellipsoid, x) -> np.ndarray:
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.shape[0] != e.dim:
        raise DimensionMismatch(f"point has {p.shape[0]} coordinates, ellipsoid has {e.dim}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"point must be finite, got {p.tolist()}")
    return p


def level_value(e: Ellipsoid, x, t: float = 0.0) -> float:
    """``sum_i x_i**2 / (a_i**2 + t)``; equals 1 on the confocal surface ``t``."""
    if t < 0:
        raise NegativeParameter(f"confocal parameter must be >= 0, got {t}")
    p = as_point(e, x)
    return math.fsum(p * p / (e.axes2 + t))


def gamma(e: Ellipsoid, t: float) -> float:
    """Volume ratio weight ``prod_i a_i / sqrt(a_i**2 + t)``."""
    if t < 0:
        raise NegativeParameter(f"confocal parameter must be >= 0, got {t}")
    a2 = e.axes2
    return math.sqrt(math.prod((a2 / (a2 + t)).tolist()))


def solve_tau(
    e: Ellipsoid,
    x,
    tol: float = DEFAULT_TAU_TOL,
    max_iter: int = DEFAULT_TAU_MAX_ITER,
) -> float:
    """Confocal parameter of an exterior point.

    Safeguarded Newton from the lower bracket end ``|x|^2 - max a_i^2``; the
    level function is convex and decreasing so the iterates approach the
    root from below.
    """
    p = as_point(e, x)
    tau, _, status = _backend.kernels.solve_tau(e.axes2, p * p, tol, max_iter)
    if status == _backend.STATUS_NOT_EXTERIOR:
        raise NotExterior(f"point {p.tolist()} is not outside the ellipsoid")
    if status == _backend.STATUS_NO_CONVERGENCE:
        raise NoConvergence(f"tau iteration failed for point {p.tolist()}")
    return tau


def classify_point(e: Ellipsoid, x, boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> PointClassification:
    if not boundary_tol > 0:
        raise ValueError("boundary_tol must be positive")
    lv = level_value(e, x)
    if lv < 1.0 - boundary_tol:
        return PointClassification(PointKind.INTERIOR, 0.0)
    if abs(lv - 1.0) <= boundary_tol:
        return PointClassification(PointKind.BOUNDARY, 0.0)
    return PointClassification(PointKind.EXTERIOR, solve_tau(e, x))
