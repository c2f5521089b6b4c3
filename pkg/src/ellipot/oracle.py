"""Brute-force checks that share no code path with the 1-D reduction.

``mc_potential`` estimates ``c_N * int_E |x - y|^(2-N) dy`` by rejection
sampling from the bounding box.  Random streams come from numpy's PCG64
(128-bit state), one per shard, seeded with ``SeedSequence([seed, shard])``,
so an estimate is reproducible for a fixed ``(seed, shards)`` pair.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import TooFewSamples
from .geometry import Ellipsoid, as_point
from .potential import kernel_constant

MIN_SAMPLES = 1000
BATCH = 1 << 18
SINGULAR_FRACTION = 1e-6


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    accepted: int = 0


def excluded_ball_potential(n: int, radius: float) -> float:
    """Potential at the centre of a unit-density ball of ``radius`` in R^n.

    ``c_n * |S^{n-1}| * int_0^radius r dr = radius^2 / (2 (n-2))``.
    """
    return radius * radius / (2.0 * (n - 2))


def _shard_moments(a: np.ndarray, x: np.ndarray, n_draw: int, seed: int, shard: int,
                   h_singular: float) -> tuple[int, float, float]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, shard])))
    dim = a.shape[0]
    power = dim - 2
    accepted = 0
    s1: list[float] = []
    s2: list[float] = []
    remaining = n_draw
    while remaining > 0:
        b = min(BATCH, remaining)
        remaining -= b
        y = rng.uniform(-1.0, 1.0, size=(b, dim)) * a
        inside = np.einsum("ij,ij->i", y / a, y / a) <= 1.0
        y = y[inside]
        accepted += y.shape[0]
        d = y - x
        r = np.sqrt(np.einsum("ij,ij->i", d, d))
        keep = r >= h_singular
        k = np.zeros_like(r)
        k[keep] = r[keep] ** (-power)
        s1.append(math.fsum(k))
        s2.append(math.fsum(k * k))
    return accepted, math.fsum(s1), math.fsum(s2)


def mc_potential(
    e: Ellipsoid,
    x,
    samples: int = 1_000_000,
    seed: int = 0,
    shards: int = 1,
    workers: int = 1,
) -> OracleEstimate:
    """Monte Carlo estimate of the unit-density potential at ``x``.

    Points of the body within ``1e-6 * max(a)`` of ``x`` are dropped and the
    exact contribution of that small ball is added back, which keeps the
    estimator finite at interior points.
    """
    if samples < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {samples}")
    p = as_point(e, x)
    a = e.axes
    n = e.dim
    h = SINGULAR_FRACTION * float(a.max())
    shards = max(1, int(shards))
    counts = [samples // shards + (1 if s < samples % shards else 0) for s in range(shards)]

    def run(s):
        return _shard_moments(a, p, counts[s], int(seed), s, h)

    if workers > 1 and shards > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(shards)))
    else:
        parts = [run(s) for s in range(shards)]

    m = sum(part[0] for part in parts)
    if m < 2:
        raise TooFewSamples("fewer than two samples fell inside the ellipsoid")
    s1 = math.fsum(part[1] for part in parts)
    s2 = math.fsum(part[2] for part in parts)
    mean = s1 / m
    var = max(0.0, (s2 - s1 * mean) / (m - 1))
    scale = kernel_constant(n) * e.volume()
    value = scale * mean
    if np.sum((p / a) ** 2) < 1.0:
        value += excluded_ball_potential(n, h)
    return OracleEstimate(value, scale * math.sqrt(var / m), samples, int(seed), m)


def fd_gradient(f: Callable[[np.ndarray], float], x, h: float) -> np.ndarray:
    """Central differences ``(f(x+h e_i) - f(x-h e_i)) / 2h``."""
    if not h > 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        step = np.zeros_like(x)
        step[i] = h
        out[i] = (f(x + step) - f(x - step)) / (2.0 * h)
    return out


def fd_laplacian(f: Callable[[np.ndarray], float], x, h: float) -> float:
    """Standard (2N+1)-point Laplacian stencil."""
    if not h > 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    centre = f(x)
    total = 0.0
    for i in range(x.shape[0]):
        step = np.zeros_like(x)
        step[i] = h
        total += f(x + step) - 2.0 * centre + f(x - step)
    return total / (h * h)
