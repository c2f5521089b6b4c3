import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipot import QuadratureConfig, integrate_tail
from ellipot.errors import InvalidBound, ToleranceNotMet
from ellipot.quadrature import GAUSS_W, KRONROD_W, NODES, adaptive_gk15, gk15

# (integrand, lower, exact); the third is the unit-sphere potential at |x| = 2
CASES = [
    (lambda t: np.exp(-t), 0.0, 1.0),
    (lambda t: t**-2.0, 3.0, 1.0 / 3.0),
    (lambda t: 0.25 * (1 + t) ** -1.5 * (1 - 4 / (1 + t)), 3.0, 1.0 / 6.0),
    (lambda t: (1 + t) ** -1.5, 0.0, 2.0),
    (lambda t: (2 + t) ** -2.5, 2.0, (2.0 / 3.0) * 4**-1.5),
]


def test_rule_weights():
    assert KRONROD_W.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_W.sum() == pytest.approx(2.0, abs=1e-15)
    # Kronrod is exact to degree 22, Gauss to degree 13
    for k in range(0, 23, 2):
        assert KRONROD_W @ NODES**k == pytest.approx(2.0 / (k + 1), abs=1e-14)
    assert np.all(np.abs(NODES) < 1)


def test_gk15_polynomial_exact():
    k, err = gk15(lambda x: x**5 - 3 * x**2, 0.0, 2.0)
    assert k == pytest.approx(64 / 6 - 8, abs=1e-13)
    assert err < 1e-12


@pytest.mark.parametrize("mapping", ["sqrt", "rational"])
@pytest.mark.parametrize("f, lower, exact", CASES)
def test_integrate_tail_examples(f, lower, exact, mapping):
    cfg = QuadratureConfig(max_subdivisions=500)
    r = integrate_tail(f, lower, cfg, mapping=mapping)
    assert r.converged
    assert r.error_estimate <= cfg.target(r.value)
    assert abs(r.value - exact) <= max(cfg.target(exact), 1e-15)
    # the reported estimate bounds the actual error
    assert abs(r.value - exact) <= r.error_estimate + 4 * np.finfo(float).eps * abs(exact)


def test_scalar_integrand():
    r = integrate_tail(lambda t: math.exp(-t), 0.0, vectorized=False)
    assert r.value == pytest.approx(1.0, abs=1e-12)


def test_invalid_bound():
    with pytest.raises(InvalidBound):
        integrate_tail(lambda t: t**-2, math.inf)
    with pytest.raises(InvalidBound):
        integrate_tail(lambda t: t**-2, math.nan)


def test_unknown_mapping():
    with pytest.raises(ValueError):
        integrate_tail(lambda t: t**-2, 1.0, mapping="log")


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)


def test_unconverged_is_flagged_not_raised():
    cfg = QuadratureConfig(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=3)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = integrate_tail(lambda t: np.exp(-t) * np.cos(5 * t) ** 2, 0.0, cfg)
    assert not r.converged
    assert any(issubclass(w.category, ToleranceNotMet) for w in caught)
    assert r.value == pytest.approx(0.5 + 0.5 / 101, rel=1e-2)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 5))
def test_linearity(alpha, beta, lower):
    def f(t):
        return (1 + t) ** -1.5

    def g(t):
        return np.exp(-t) / (1 + t)

    rf = integrate_tail(f, lower)
    rg = integrate_tail(g, lower)
    rc = integrate_tail(lambda t: alpha * f(t) + beta * g(t), lower)
    combined = abs(alpha) * rf.error_estimate + abs(beta) * rg.error_estimate + rc.error_estimate
    assert abs(rc.value - (alpha * rf.value + beta * rg.value)) <= 2 * combined + 1e-13


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 10), st.floats(0, 10))
def test_translation(lower, c):
    def g(t):
        return (1 + t) ** -2.5

    a = integrate_tail(lambda t: g(t - c), lower + c)
    b = integrate_tail(g, lower)
    assert a.value == pytest.approx(b.value, rel=1e-10)


def test_breaks_seed_the_mesh():
    from ellipot.quadrature import initial_edges

    assert initial_edges(0.0, 1.0, [0.5, 0.25, 2.0, 0.5 + 1e-15, 1.0]) == [0.0, 0.25, 0.5, 1.0]
    assert initial_edges(0.0, 1.0) == [0.0, 1.0]
    # a narrow spike the first 15-point rule cannot see
    spike = lambda x: 1e-3 / ((x - 0.7123) ** 2 + 1e-6)  # noqa: E731
    exact = 1e-3 / 1e-3 * (np.arctan((1 - 0.7123) / 1e-3) + np.arctan(0.7123 / 1e-3))
    value, _, _, ok = adaptive_gk15(spike, 0.0, 1.0, 1e-10, 1e-14, 200, breaks=[0.7123])
    assert ok and value == pytest.approx(exact, rel=1e-9)
