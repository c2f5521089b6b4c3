"""Self-checks run by ``ellipot validate``.

Every check compares the production path with something it does not share
code with: finite differences, Monte Carlo, closed forms, or an exact
identity.  Random points are drawn from ``numpy.random.default_rng(seed)``
so a report is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .demag import demag_factors, demag_factors_integral
from .geometry import Ellipsoid, level_value, solve_tau
from .oracle import fd_gradient, fd_laplacian, mc_potential
from .potential import field_at, hollow_shell_field, kernel_constant, potential_at
from .quadrature import QuadratureConfig

# tighter than the default so finite-difference checks see truncation error only
FD_CFG = QuadratureConfig(rel_tol=1e-13, abs_tol=1e-15, max_subdivisions=400)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    cases: int

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "cases": self.cases,
        }


def _check(name, errors, tol) -> Check:
    errors = [float(v) for v in errors]
    worst = max(errors) if errors else 0.0
    return Check(name, bool(worst < tol), worst, tol, len(errors))


def random_direction(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def boundary_point(e: Ellipsoid, direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    return d / math.sqrt(np.sum(d * d / e.axes2))


def interior_points(e: Ellipsoid, rng, count: int, margin: float = 0.05):
    """Points with level value below ``(1 - margin)**2``."""
    out = []
    while len(out) < count:
        b = boundary_point(e, random_direction(rng, e.dim))
        out.append(b * rng.uniform(0.0, 1.0 - margin))
    return out


def exterior_points(e: Ellipsoid, rng, count: int, lo: float = 1.1, hi: float = 3.0):
    return [boundary_point(e, random_direction(rng, e.dim)) * rng.uniform(lo, hi)
            for _ in range(count)]


def run_validation(e: Ellipsoid, seed: int = 0, samples: int = 200_000,
                   cfg: QuadratureConfig | None = None) -> list[Check]:
    cfg = cfg or QuadratureConfig()
    rng = np.random.default_rng(seed)
    checks: list[Check] = []

    def pot(p):
        return potential_at(e, p, FD_CFG).value

    ext = exterior_points(e, rng, 20)
    checks.append(_check(
        "tau_equation",
        [abs(level_value(e, x, solve_tau(e, x)) - 1.0) for x in ext],
        1e-12,
    ))

    h = 1e-3 * float(e.axes.min())
    checks.append(_check(
        "poisson_interior",
        [abs(fd_laplacian(pot, x, h) + 1.0) for x in interior_points(e, rng, 10)],
        1e-4,
    ))
    checks.append(_check(
        "poisson_exterior",
        [abs(fd_laplacian(pot, x, h)) for x in ext[:10]],
        1e-4,
    ))

    gaps = []
    for _ in range(10):
        b = boundary_point(e, random_direction(rng, e.dim))
        inner = potential_at(e, b * (1 - 1e-10), cfg, boundary_tol=1e-14)
        outer = potential_at(e, b * (1 + 1e-10), cfg, boundary_tol=1e-14)
        gaps.append(abs(inner.value - outer.value))
    checks.append(_check("boundary_continuity", gaps, 1e-8))

    mixed = interior_points(e, rng, 5) + ext[10:15]
    checks.append(_check(
        "gradient_vs_finite_differences",
        [np.max(np.abs(field_at(e, x, cfg) - fd_gradient(pot, x, 1e-5 * float(e.axes.max()))))
         for x in mixed],
        1e-6,
    ))

    errs = []
    for x in mixed:
        lam = float(np.exp(rng.uniform(-2, 2)))
        ref = potential_at(e, x, cfg).value
        errs.append(abs(potential_at(e.scaled(lam), lam * x, cfg).value / (lam * lam * ref) - 1.0))
    checks.append(_check("potential_scaling", errs, 1e-9))

    far = 1e4 * float(e.axes.max())
    monopole = kernel_constant(e.dim) * e.volume()
    errs = []
    for _ in range(5):
        x = far * random_direction(rng, e.dim)
        errs.append(abs(far ** (e.dim - 2) * potential_at(e, x, cfg).value / monopole - 1.0))
    checks.append(_check("far_field_monopole", errs, 1e-6))

    checks.append(_check(
        "hollow_shell_field",
        [np.max(np.abs(hollow_shell_field(e, 2.0, x, cfg))) for x in interior_points(e, rng, 5)],
        1e-9,
    ))

    if e.dim == 3:
        P = demag_factors_integral(e, cfg)
        checks.append(_check("demag_trace", [abs(P.trace - 1.0)], 1e-9))
        order = np.argsort(-e.axes, kind="stable")
        sorted_p = np.asarray(P.factors)[order]
        checks.append(_check(
            "demag_ordering",
            [max(0.0, float(sorted_p[i] - sorted_p[i + 1])) for i in range(2)],
            1e-12,
        ))
        closed = demag_factors(e, "auto")
        checks.append(_check(
            "demag_closed_form_vs_integral",
            np.abs(np.asarray(closed.factors) - np.asarray(P.factors)),
            1e-9,
        ))
        checks.append(_check(
            "interior_field_uniform",
            [np.max(np.abs(field_at(e, x, cfg) + np.asarray(P.factors) * x))
             for x in interior_points(e, rng, 10)],
            1e-8,
        ))
        lam = float(np.exp(rng.uniform(-2, 2)))
        checks.append(_check(
            "demag_scale_invariance",
            np.abs(np.asarray(demag_factors_integral(e.scaled(lam), cfg).factors)
                   - np.asarray(P.factors)),
            1e-10,
        ))

    sigmas = []
    for k, x in enumerate(exterior_points(e, rng, 3)):
        est = mc_potential(e, x, samples, seed + k)
        sigmas.append(abs(est.value - potential_at(e, x, cfg).value) / est.std_error)
    checks.append(_check("monte_carlo_sigmas", sigmas, 4.0))
    return checks
