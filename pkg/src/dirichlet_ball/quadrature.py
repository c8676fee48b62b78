"""Tensor Gauss-Legendre rules on geometrically graded panels.

Meshes are graded toward 0 in every coordinate, which resolves both a
near-singular corner of width ``h`` and algebraic endpoint singularities
``u^(gamma-1)`` at exponential rate in the number of nodes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _gauss_legendre(q: int):
    x, w = np.polynomial.legendre.leggauss(q)
    return x, w


def graded_rule(h_min: float, panels: int, q: int, upper: float = 1.0):
    """Nodes and weights on ``(0, upper)`` with breakpoints ``0, h_min, ..., upper``.

    The ``panels`` breakpoints above ``h_min`` are geometrically spaced.
    """
    h_min = min(h_min, upper / 10.0)
    edges = np.concatenate([[0.0], np.geomspace(h_min, upper, panels)])
    x, w = _gauss_legendre(q)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x[None, :] + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def mirrored(nodes: np.ndarray, weights: np.ndarray):
    """Extend a rule on ``(0, c)`` to ``(-c, c)`` by reflection."""
    return np.concatenate([-nodes[::-1], nodes]), np.concatenate([weights[::-1], weights])


def tensor_sum(func, rules, chunk: int = 1 << 22) -> float:
    """``sum_i w_i func(x_i)`` over the tensor product of 1-D ``rules``.

    ``func`` receives one broadcastable array per coordinate. The first axis
    is processed in slices so memory stays bounded.
    """
    first_nodes, first_weights = rules[0]
    rest = rules[1:]
    inner_size = int(np.prod([len(r[0]) for r in rest])) if rest else 1
    step = max(1, chunk // max(inner_size, 1))
    shape_rest = [len(r[0]) for r in rest]
    total = 0.0
    for start in range(0, len(first_nodes), step):
        sl = slice(start, start + step)
        grids = [first_nodes[sl].reshape((-1,) + (1,) * len(rest))]
        wgt = first_weights[sl].reshape((-1,) + (1,) * len(rest))
        for i, (x, w) in enumerate(rest):
            shape = [1] * (len(rest) + 1)
            shape[i + 1] = shape_rest[i]
            grids.append(x.reshape(shape))
            wgt = wgt * w.reshape(shape)
        total += float(np.sum(wgt * func(*grids)))
    return total
