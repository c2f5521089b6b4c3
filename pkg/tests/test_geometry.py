import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ellipot import PointKind, classify_point, gamma, level_value, make_ellipsoid, solve_tau
from ellipot.errors import (
    DimensionMismatch,
    DimensionTooSmall,
    NegativeParameter,
    NonPositiveAxis,
    NotExterior,
)

axis = st.floats(0.1, 10.0)
axes3 = st.tuples(axis, axis, axis)
coord = st.floats(-20.0, 20.0)


def test_make_ellipsoid_sphere():
    e = make_ellipsoid([1, 1, 1])
    assert e.semi_axes == (1.0, 1.0, 1.0)
    assert e.dim == 3
    assert e.is_sphere()


def test_make_ellipsoid_prolate():
    e = make_ellipsoid((2, 1, 1))
    assert e.dim == 3 and e.semi_axes[0] > e.semi_axes[1] == e.semi_axes[2]


@pytest.mark.parametrize("bad", [(1, -1, 1), (1, 0, 1), (1, math.nan, 1), (1, math.inf, 1)])
def test_make_ellipsoid_rejects_bad_axes(bad):
    with pytest.raises(NonPositiveAxis):
        make_ellipsoid(bad)


def test_make_ellipsoid_rejects_low_dimension():
    with pytest.raises(DimensionTooSmall):
        make_ellipsoid((1, 2))


def test_volume():
    assert make_ellipsoid((3, 2, 1)).volume() == pytest.approx(4 * math.pi * 6 / 3)
    # unit 4-ball has volume pi^2 / 2
    assert make_ellipsoid((1, 1, 1, 1)).volume() == pytest.approx(math.pi**2 / 2)


@pytest.mark.parametrize(
    "axes, x, t, expected",
    [
        ((1, 1, 1), (2, 0, 0), 0.0, 4.0),
        ((1, 1, 1), (2, 0, 0), 3.0, 1.0),
        ((2, 1, 1), (3, 0, 0), 5.0, 1.0),
    ],
)
def test_level_value(axes, x, t, expected):
    assert level_value(make_ellipsoid(axes), x, t) == pytest.approx(expected, abs=1e-15)


def test_level_value_rejects_negative_t():
    with pytest.raises(NegativeParameter):
        level_value(make_ellipsoid((1, 1, 1)), (1, 0, 0), -1.0)


def test_level_value_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        level_value(make_ellipsoid((1, 1, 1)), (1, 0), 0.0)


@pytest.mark.parametrize(
    "axes, x, expected",
    [((1, 1, 1), (2, 0, 0), 3.0), ((2, 1, 1), (3, 0, 0), 5.0), ((2, 1, 1), (0, 0, 4), 15.0)],
)
def test_solve_tau_examples(kernels, axes, x, expected):
    assert solve_tau(make_ellipsoid(axes), x) == pytest.approx(expected, rel=1e-14)


def test_solve_tau_rejects_interior(kernels):
    with pytest.raises(NotExterior):
        solve_tau(make_ellipsoid((1, 1, 1)), (0.5, 0, 0))


def test_classify_examples():
    e = make_ellipsoid((1, 1, 1))
    assert classify_point(e, (0, 0, 0)).kind is PointKind.INTERIOR
    assert classify_point(e, (0, 0, 0)).tau == 0.0
    pc = classify_point(e, (2, 0, 0))
    assert pc.kind is PointKind.EXTERIOR and pc.tau == pytest.approx(3.0)
    pc = classify_point(e, (1, 0, 0))
    assert pc.kind is PointKind.BOUNDARY and pc.tau == 0.0


def test_classify_boundary_tolerance():
    e = make_ellipsoid((1, 1, 1))
    assert classify_point(e, (1 + 1e-11, 0, 0)).kind is PointKind.BOUNDARY
    assert classify_point(e, (1 + 1e-11, 0, 0), boundary_tol=1e-14).kind is PointKind.EXTERIOR


@pytest.mark.parametrize(
    "axes, t, expected", [((3, 2, 1), 0.0, 1.0), ((1, 1, 1), 3.0, 0.125), ((2, 1, 1), 5.0, 1 / 9)]
)
def test_gamma_examples(axes, t, expected):
    assert gamma(make_ellipsoid(axes), t) == pytest.approx(expected, rel=1e-15)


def test_gamma_asymptotics():
    e = make_ellipsoid((3, 2, 1))
    t = 1e12
    assert gamma(e, t) * t**1.5 == pytest.approx(6.0, rel=1e-10)


@settings(max_examples=200, deadline=None)
@given(axes3, st.tuples(coord, coord, coord), st.floats(0, 100), st.floats(1e-3, 100))
def test_level_value_decreasing(axes, x, t, dt):
    e = make_ellipsoid(axes)
    assume(float(np.dot(x, x)) > 1e-6)
    assert level_value(e, x, t + dt) < level_value(e, x, t)


@settings(max_examples=200, deadline=None)
@given(axes3, st.tuples(coord, coord, coord))
def test_tau_solves_equation_and_bracket(axes, x):
    e = make_ellipsoid(axes)
    if level_value(e, x) <= 1.0 + 1e-9:
        return
    tau = solve_tau(e, x)
    assert 0.0 < tau < float(np.dot(x, x))
    assert abs(level_value(e, x, tau) - 1.0) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(axes3, st.tuples(coord, coord, coord), st.permutations([0, 1, 2]))
def test_permutation_equivariance(axes, x, perm):
    e = make_ellipsoid(axes)
    ep = make_ellipsoid([axes[i] for i in perm])
    xp = [x[i] for i in perm]
    assert level_value(ep, xp) == pytest.approx(level_value(e, x), rel=1e-14)
    assert gamma(ep, 2.5) == pytest.approx(gamma(e, 2.5), rel=1e-14)
    a, b = classify_point(e, x), classify_point(ep, xp)
    assert a.kind == b.kind
    assert b.tau == pytest.approx(a.tau, rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(axes3, st.tuples(coord, coord, coord), st.floats(0.01, 100))
def test_tau_scaling(axes, x, lam):
    e = make_ellipsoid(axes)
    if level_value(e, x) <= 1.0 + 1e-6:
        return
    t1 = solve_tau(e, x)
    t2 = solve_tau(e.scaled(lam), [lam * v for v in x])
    assert t2 == pytest.approx(lam * lam * t1, rel=1e-10)


@pytest.mark.parametrize("i", [0, 1, 2])
def test_tau_vanishes_at_boundary(i):
    e = make_ellipsoid((3, 2, 1))
    a = e.semi_axes[i]
    for eps in (1e-2, 1e-4, 1e-6):
        x = [0.0, 0.0, 0.0]
        x[i] = a * (1 + eps)
        tau = solve_tau(e, x)
        # exact on an axis: tau = a^2 ((1+eps)^2 - 1)
        assert tau == pytest.approx(a * a * eps * (2 + eps), rel=1e-8)
