import math

import numpy as np
import pytest

from ellipot import fd_gradient, fd_laplacian, make_ellipsoid, mc_potential, potential_at
from ellipot.errors import TooFewSamples
from ellipot.oracle import excluded_ball_potential
from ellipot.quadrature import adaptive_gk15

SPHERE = make_ellipsoid((1, 1, 1))


@pytest.mark.parametrize("x, expected", [((2, 0, 0), 1 / 6), ((0, 0, 0), 0.5)])
def test_mc_sphere(x, expected):
    est = mc_potential(SPHERE, x, 1_000_000, seed=5)
    assert abs(est.value - expected) < 3 * est.std_error
    assert est.samples == 1_000_000
    assert 0.45 < est.accepted / est.samples < 0.6


def test_mc_deterministic():
    a = mc_potential(SPHERE, (0.3, 0.1, 0), 20_000, seed=9)
    b = mc_potential(SPHERE, (0.3, 0.1, 0), 20_000, seed=9)
    assert a == b
    c = mc_potential(SPHERE, (0.3, 0.1, 0), 20_000, seed=10)
    assert c.value != a.value


def test_mc_shards_deterministic_and_worker_independent():
    e = make_ellipsoid((3, 2, 1))
    a = mc_potential(e, (4, 0, 0), 50_000, seed=1, shards=4, workers=1)
    b = mc_potential(e, (4, 0, 0), 50_000, seed=1, shards=4, workers=4)
    assert a == b


def test_mc_too_few_samples():
    with pytest.raises(TooFewSamples):
        mc_potential(SPHERE, (0, 0, 0), 10)


def test_mc_error_shrinks_with_samples():
    e = make_ellipsoid((3, 2, 1))
    ns = (10_000, 100_000, 1_000_000)
    errs = [mc_potential(e, (0.5, 0.2, 0.1), n, seed=3).std_error for n in ns]
    assert errs[0] > errs[1] > errs[2]
    # 1/r is heavy-tailed inside, so the small-n error bar is itself noisy
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.1)


def test_mc_interior_converges():
    e = make_ellipsoid((3, 2, 1))
    x = (0.5, 0.2, 0.1)
    exact = potential_at(e, x).value
    est = mc_potential(e, x, 1_000_000, seed=8)
    assert abs(est.value - exact) < 4 * est.std_error


@pytest.mark.parametrize("n", [3, 4, 5])
def test_excluded_ball_radial_oracle(n):
    # c_N |S^{N-1}| int_0^h r^{N-1} r^{2-N} dr = int_0^h r dr / (N-2)
    h = 0.37
    radial, *_ = adaptive_gk15(lambda r: r / (n - 2), 0.0, h, 1e-14, 1e-300, 20)
    assert excluded_ball_potential(n, h) == pytest.approx(radial, rel=1e-14)


def test_fd_gradient_examples():
    assert fd_gradient(lambda p: float(np.dot(p, p)), (1, 2, 3), 1e-5) == pytest.approx([2, 4, 6], abs=1e-9)
    assert np.all(fd_gradient(lambda p: 7.0, (1, 2, 3), 1e-3) == 0)
    g = fd_gradient(lambda p: potential_at(SPHERE, p).value, (0.3, 0, 0), 1e-5)
    assert g == pytest.approx([-0.1, 0, 0], abs=1e-6)


def test_fd_laplacian_examples():
    for n in (3, 4):
        x = np.linspace(0.5, 2, n)
        assert fd_laplacian(lambda p: float(np.dot(p, p)), x, 1e-3) == pytest.approx(2 * n, rel=1e-8)
    f = lambda p: potential_at(SPHERE, p).value  # noqa: E731
    assert fd_laplacian(f, (0, 0, 0), 1e-3) == pytest.approx(-1.0, abs=1e-4)
    assert fd_laplacian(f, (3, 0, 0), 1e-3) == pytest.approx(0.0, abs=1e-4)


def test_fd_rejects_bad_step():
    with pytest.raises(ValueError):
        fd_gradient(lambda p: 0.0, (0, 0, 0), 0.0)
    with pytest.raises(ValueError):
        fd_laplacian(lambda p: 0.0, (0, 0, 0), -1.0)


def test_mc_four_ball_centre():
    est = mc_potential(make_ellipsoid((1, 1, 1, 1)), (0, 0, 0, 0), 400_000, seed=2)
    assert abs(est.value - 0.25) < 4 * est.std_error
    assert math.isfinite(est.std_error) and est.std_error > 0
