"""Point sets on the unit ball and sphere of C^n.

Inequality checks use scrambled Halton points (deterministic for a seed).
Monte Carlo estimates use pseudo-random chunks whose streams are keyed by
``(seed, chunk index)``, so results do not depend on how chunks are scheduled.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

MC_CHUNK = 1 << 16
_EPS = 1e-12


def _to_complex(x: np.ndarray) -> np.ndarray:
    n = x.shape[1] // 2
    return x[:, :n] + 1j * x[:, n:]


def _directions(u: np.ndarray) -> np.ndarray:
    # uniform cube -> Gaussian -> unit sphere in R^{2n}
    g = ndtri(np.clip(u, _EPS, 1 - _EPS))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def qmc_sphere(n: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` quasi-random points on the unit sphere of C^n, shape ``(count, n)``."""
    u = qmc.Halton(d=2 * n, scramble=True, seed=seed).random(count)
    return _to_complex(_directions(u))


def qmc_ball(n: int, count: int, seed: int = 0, radius: float = 1.0) -> np.ndarray:
    """Quasi-random points uniformly distributed in the ball of C^n of given radius."""
    u = qmc.Halton(d=2 * n + 1, scramble=True, seed=seed).random(count)
    rad = radius * u[:, -1] ** (1.0 / (2 * n))
    return _to_complex(_directions(u[:, :-1]) * rad[:, None])


def qmc_closed_ball(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Half interior points, half sphere points (a holomorphic modulus peaks on the sphere)."""
    inner = qmc_ball(n, count - count // 2, seed)
    outer = qmc_sphere(n, count // 2, seed + 1)
    return np.concatenate([inner, outer])


def _mc_chunk(n: int, size: int, seed: int, index: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    g = rng.standard_normal((size, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = rng.random(size) ** (1.0 / (2 * n))
    return _to_complex(g * rad[:, None])


def mc_ball_chunks(n: int, count: int, seed: int):
    """Yield uniform ball samples in chunks of ``MC_CHUNK``; chunk ``i`` depends only on ``(seed, i)``."""
    index = 0
    remaining = count
    while remaining > 0:
        size = min(MC_CHUNK, remaining)
        yield _mc_chunk(n, size, seed, index)
        remaining -= size
        index += 1
