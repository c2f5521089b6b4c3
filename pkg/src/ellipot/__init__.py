"""Newtonian potential and demagnetizing factors of homogeneous ellipsoids."""

from ._backend import BACKEND
from .demag import (
    DemagTensor,
    Magnetization,
    demag_closed_triaxial,
    demag_factors,
    demag_factors_carlson,
    demag_factors_integral,
    demag_oblate,
    demag_prolate,
    elliptic_e_incomplete,
    elliptic_f_incomplete,
    magnetostatic_potential,
    stray_field,
)
from .geometry import (
    Ellipsoid,
    PointClassification,
    PointKind,
    classify_point,
    gamma,
    level_value,
    make_ellipsoid,
    solve_tau,
)
from .oracle import OracleEstimate, fd_gradient, fd_laplacian, mc_potential
from .potential import (
    FieldValue,
    GravityConfig,
    PotentialValue,
    evaluate_field,
    field_at,
    gravitational_potential,
    hollow_shell_field,
    hollow_shell_potential,
    kernel_constant,
    potential_at,
)
from .quadrature import IntegralResult, QuadratureConfig, integrate_tail

__all__ = [
    "BACKEND",
    "DemagTensor",
    "Ellipsoid",
    "FieldValue",
    "GravityConfig",
    "IntegralResult",
    "Magnetization",
    "OracleEstimate",
    "PointClassification",
    "PointKind",
    "PotentialValue",
    "QuadratureConfig",
    "classify_point",
    "demag_closed_triaxial",
    "demag_factors",
    "demag_factors_carlson",
    "demag_factors_integral",
    "demag_oblate",
    "demag_prolate",
    "elliptic_e_incomplete",
    "elliptic_f_incomplete",
    "evaluate_field",
    "fd_gradient",
    "fd_laplacian",
    "field_at",
    "gamma",
    "gravitational_potential",
    "hollow_shell_field",
    "hollow_shell_potential",
    "integrate_tail",
    "kernel_constant",
    "level_value",
    "magnetostatic_potential",
    "make_ellipsoid",
    "mc_potential",
    "potential_at",
    "solve_tau",
    "stray_field",
]
