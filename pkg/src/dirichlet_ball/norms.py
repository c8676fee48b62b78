"""Weights, norms and inner products of the Dirichlet-type spaces D_alpha(B_n).

A monomial ``z^k`` has squared norm

    w_alpha(k) = (n + |k|)^alpha * k! (n-1)! / (n-1+|k|)!

i.e. ``(n+|k|)^alpha`` times the squared norm of ``z^k`` in the Hardy space of
the ball. ``alpha = 0`` is the Hardy space, and monomials are mutually
orthogonal for every ``alpha``.

``formula="printed"`` switches to the variant with ``k!`` in the denominator,
kept for comparison only; it does not reduce to the Hardy space at alpha = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, InvalidInput, WeightOverflow
from .series import MultiIndex, TruncatedPowerSeries, enumerate_multiindices

WEIGHT_FORMULAS = ("standard", "printed")
_LOG_LIMIT = 700.0


def _log_mi_factorial(k) -> float:
    return float(sum(gammaln(e + 1) for e in k))


@dataclass
class SpaceParams:
    """``(n, alpha)`` for D_alpha(B_n) together with a write-once weight cache."""

    n: int
    alpha: float
    formula: str = "standard"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput(f"dimension must be >= 1, got {self.n}")
        if self.formula not in WEIGHT_FORMULAS:
            raise InvalidInput(f"unknown weight formula {self.formula!r}")
        self.alpha = float(self.alpha)

    def with_alpha(self, alpha: float) -> "SpaceParams":
        return SpaceParams(self.n, alpha, self.formula)

    def log_weight(self, k: MultiIndex) -> float:
        k = tuple(k)
        cached = self._cache.get(k)
        if cached is not None:
            return cached
        if len(k) != self.n:
            raise DimensionMismatch(f"multi-index {k} has wrong length for n={self.n}")
        n, d = self.n, sum(k)
        logw = self.alpha * math.log(n + d) + float(gammaln(n) - gammaln(n + d))
        lkf = _log_mi_factorial(k)
        logw += lkf if self.formula == "standard" else -lkf
        # setdefault keeps population idempotent under concurrent writers
        return self._cache.setdefault(k, logw)


def weight(params: SpaceParams, k: MultiIndex) -> float:
    """Squared D_alpha norm of the monomial ``z^k``.

    Raises :class:`WeightOverflow` when the weight is outside double range;
    ``params.log_weight`` has no such limit.
    """
    logw = params.log_weight(k)
    if abs(logw) > _LOG_LIMIT:
        raise WeightOverflow(f"log weight {logw:.1f} for k={tuple(k)} is out of range")
    return math.exp(logw)


def _check(f: TruncatedPowerSeries, params: SpaceParams):
    if f.dimension != params.n:
        raise DimensionMismatch(f"series dimension {f.dimension} but space has n={params.n}")


def norm_sq(f: TruncatedPowerSeries, params: SpaceParams) -> float:
    _check(f, params)
    total = 0.0
    for k, a in f.items():
        total += weight(params, k) * (a.real * a.real + a.imag * a.imag)
    return total


def norm(f: TruncatedPowerSeries, params: SpaceParams) -> float:
    return math.sqrt(norm_sq(f, params))


def inner(f: TruncatedPowerSeries, g: TruncatedPowerSeries, params: SpaceParams) -> complex:
    """``<f, g> = sum_k w_alpha(k) a_k conj(b_k)``, linear in the first slot."""
    _check(f, params)
    _check(g, params)
    total = 0j
    if len(g) < len(f):
        for k, b in g.items():
            a = f.coefficients.get(k)
            if a is not None:
                total += weight(params, k) * a * b.conjugate()
    else:
        for k, a in f.items():
            b = g.coefficients.get(k)
            if b is not None:
                total += weight(params, k) * a * b.conjugate()
    return total


def log_bergman_coefficient_weight(n: int, k: MultiIndex, c: float) -> float:
    if c <= -1:
        raise InvalidInput(f"Bergman exponent c={c} <= -1 gives a divergent integral")
    d = sum(k)
    return _log_mi_factorial(k) + float(gammaln(c + 1) + gammaln(n + 1) - gammaln(n + d + c + 1))


def bergman_coefficient_weight(n: int, k: MultiIndex, c: float) -> float:
    """``int_B (1-|z|^2)^c |z^k|^2 dv`` with ``v(B) = 1``.

    Polar coordinates reduce this to ``k! Gamma(c+1) n! / Gamma(n+|k|+c+1)``.
    """
    return math.exp(log_bergman_coefficient_weight(n, k, c))


def bergman_norm_sq(f: TruncatedPowerSeries, c: float) -> float:
    """Weighted Bergman integral of ``|f|^2`` from coefficients (monomials are orthogonal)."""
    return sum(
        bergman_coefficient_weight(f.dimension, k, c) * abs(a) ** 2 for k, a in f.items()
    )


@dataclass
class EquivalenceReport:
    n: int
    alpha: float
    bergman_exponent: float
    ratios: dict  # |k| -> w_alpha(k) / bergman weight
    split_spread: dict  # |k| -> max relative spread of the ratio across all k of that degree
    min_ratio: float
    max_ratio: float
    normalization: str = "volume measure normalized so that v(B_n) = 1"

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio

    def last_decade_variation(self) -> float:
        """Relative variation of the ratio over the top ten degrees."""
        degs = sorted(self.ratios)
        top = [self.ratios[d] for d in degs[-11:]]
        return (max(top) - min(top)) / min(top)

    def rows(self):
        return [
            {"degree": d, "ratio": self.ratios[d], "split_spread": self.split_spread[d]}
            for d in sorted(self.ratios)
        ]


def check_norm_equivalence(params: SpaceParams, D_max: int) -> EquivalenceReport:
    """Compare D_alpha weights with Bergman weights for exponent ``c = -(alpha+1)``.

    Requires ``alpha < 0`` so that ``c > -1``. The ratio is computed for every
    multi-index, so the per-degree table also records how much it varies
    between multi-indices of the same degree.
    """
    if params.alpha >= 0:
        raise InvalidInput("norm equivalence with a Bergman integral needs alpha < 0")
    c = -1.0 - params.alpha
    per_degree: dict[int, list[float]] = {}
    for k in enumerate_multiindices(params.n, D_max):
        r = math.exp(params.log_weight(k) - log_bergman_coefficient_weight(params.n, k, c))
        per_degree.setdefault(sum(k), []).append(r)
    ratios = {d: vals[0] for d, vals in per_degree.items()}
    spread = {d: (max(v) - min(v)) / min(v) for d, v in per_degree.items()}
    vals = np.array(list(ratios.values()))
    return EquivalenceReport(
        n=params.n,
        alpha=params.alpha,
        bergman_exponent=c,
        ratios=ratios,
        split_spread=spread,
        min_ratio=float(vals.min()),
        max_ratio=float(vals.max()),
    )
