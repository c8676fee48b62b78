"""Cyclicity diagnostics: optimal polynomial approximants and dilation norms.

``f`` is cyclic when ``inf_p ||p f - 1||`` over polynomials tends to zero. For
each degree bound ``N`` the infimum over ``deg p <= N`` is a least-squares
problem in the shifted basis ``{z^j f : |j| <= N}`` and is solved through its
Gram system. The second diagnostic is the norm of ``f / f_r`` as ``r -> 1``;
staying bounded is sufficient for cyclicity.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import IllConditionedBasis, InvalidInput, NumericalFailure, TruncationError
from .norms import SpaceParams, inner, norm_sq, weight
from .series import (
    MAX_ADAPTIVE_DEGREE,
    MultiIndex,
    TruncatedPowerSeries,
    adaptive_quotient,
    dilate,
    quotient_shells,
    enumerate_multiindices,
    multiply,
)

log = logging.getLogger(__name__)

PIVOT_FLOOR = 1e-12
AGREEMENT_TOL = 1e-8


def shift(f: TruncatedPowerSeries, j: MultiIndex) -> TruncatedPowerSeries:
    """``z^j f``."""
    return TruncatedPowerSeries(
        f.dimension,
        f.truncation_degree + sum(j),
        {tuple(a + b for a, b in zip(k, j)): c for k, c in f.items()},
    )


@dataclass
class GramSystem:
    degree: int
    basis: list  # multi-indices j, graded-lex
    matrix: np.ndarray  # matrix[a, b] = <z^{j_a} f, z^{j_b} f>
    rhs: np.ndarray  # rhs[a] = <1, z^{j_a} f>

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))


@dataclass
class ApproximantResult:
    degree: int
    coefficients: dict  # multi-index -> complex coefficient of the optimal p
    dist_sq: float
    residual_norm_check: float

    def polynomial(self, n: int) -> TruncatedPowerSeries:
        return TruncatedPowerSeries(n, self.degree, self.coefficients)


def gram_matrix(
    f: TruncatedPowerSeries,
    N: int,
    params: SpaceParams,
    *,
    assume_polynomial: bool = True,
    tail_degrees: int = 10,
) -> GramSystem:
    """Gram system of the shifted copies ``z^j f``, ``|j| <= N``.

    Inner products are exact when ``f`` is a polynomial. A genuinely truncated
    series is accepted only with ``assume_polynomial=False`` and at least
    ``N + tail_degrees`` known degrees.
    """
    if f.dimension != params.n:
        raise InvalidInput(f"series dimension {f.dimension} does not match n={params.n}")
    if len(f) == 0:
        raise InvalidInput("the zero function has no approximants")
    if not assume_polynomial and f.truncation_degree < N + tail_degrees:
        raise TruncationError(
            f"series known to degree {f.truncation_degree}, need {N + tail_degrees} for N={N}"
        )
    basis = enumerate_multiindices(params.n, N)
    shifted = [shift(f, j) for j in basis]
    size = len(basis)
    G = np.zeros((size, size), dtype=complex)
    for a in range(size):
        G[a, a] = norm_sq(shifted[a], params)
        for b in range(a + 1, size):
            v = inner(shifted[a], shifted[b], params)
            G[a, b] = v
            G[b, a] = v.conjugate()
    rhs = np.zeros(size, dtype=complex)
    rhs[0] = weight(params, basis[0]) * np.conj(f.constant_term)
    return GramSystem(N, basis, G, rhs)


def optimal_approximant(
    f: TruncatedPowerSeries, N: int, params: SpaceParams
) -> ApproximantResult:
    """Minimise ``||p f - 1||^2`` over polynomials of degree at most ``N``.

    Solved by Cholesky on the Jacobi-scaled normal equations. A scaled pivot
    below ``PIVOT_FLOOR`` raises :class:`IllConditionedBasis` rather than
    regularising, since a regularised distance would blur the very dichotomy
    being measured. The distance is computed from the quadratic form and again
    from the explicit residual; the two must agree.
    """
    system = gram_matrix(f, N, params)
    # Normal equations: sum_b <phi_b, phi_a> c_b = <1, phi_a>, i.e. G^T c = rhs.
    A = system.matrix.T
    s = 1.0 / np.sqrt(np.real(np.diag(A)))
    scaled = A * s[:, None] * s[None, :]
    try:
        L = scipy.linalg.cholesky(scaled, lower=True)
    except np.linalg.LinAlgError:
        raise IllConditionedBasis(
            f"scaled Gram matrix not positive definite at N={N}", degree_reached=N - 1
        ) from None
    pivots = np.real(np.diag(L)) ** 2
    if pivots.min() < PIVOT_FLOOR:
        raise IllConditionedBasis(
            f"scaled Gram pivot {pivots.min():.3e} below {PIVOT_FLOOR:g} at N={N}",
            degree_reached=N - 1,
        )
    y = scipy.linalg.cho_solve((L, True), s * system.rhs)
    c = s * y
    w0 = weight(params, (0,) * params.n)
    dist_sq = float(w0 - np.real(np.vdot(system.rhs, c)))

    coeffs = {j: complex(v) for j, v in zip(system.basis, c)}
    p = TruncatedPowerSeries(params.n, N, coeffs)
    D = N + max(f.polynomial_degree, 0)
    residual = TruncatedPowerSeries.constant(params.n, 1.0, D) - multiply(p, f, D)
    check = norm_sq(residual, params)
    if abs(dist_sq - check) > AGREEMENT_TOL * (1.0 + abs(dist_sq)):
        raise NumericalFailure(
            f"quadratic-form distance {dist_sq:.12g} disagrees with residual {check:.12g} at N={N}"
        )
    return ApproximantResult(N, coeffs, max(dist_sq, 0.0), check)


def aitken_limit(values: Sequence[float], rel_tol: float = 1e-12) -> float:
    """Aitken delta-squared estimate of the limit of a monotone sequence.

    Repeated values (plateaus where the relevant subspace did not grow) are
    collapsed first; with fewer than three distinct values the last is returned.
    """
    distinct: list[float] = []
    for v in values:
        if not distinct or abs(v - distinct[-1]) > rel_tol * max(abs(v), 1.0):
            distinct.append(v)
    if len(distinct) < 3:
        return distinct[-1]
    x0, x1, x2 = distinct[-3:]
    denom = (x2 - x1) - (x1 - x0)
    if denom == 0:
        return x2
    return x2 - (x2 - x1) ** 2 / denom


@dataclass
class ApproximantSweep:
    alphas: list
    degrees: list
    table: dict  # (alpha, N) -> dist_sq
    limits: dict  # alpha -> Aitken extrapolated limit
    nonincreasing: dict  # alpha -> bool
    strictly_decreasing: dict  # alpha -> bool
    failure: Optional[dict] = None  # alpha -> degree reached, when a solve failed

    def series(self, alpha: float) -> list[float]:
        return [self.table[(alpha, N)] for N in self.degrees if (alpha, N) in self.table]

    def rows(self):
        return [
            {"alpha": a, "N": N, "dist_sq": self.table[(a, N)]}
            for a in self.alphas
            for N in self.degrees
            if (a, N) in self.table
        ]


def approximant_sweep(
    f: TruncatedPowerSeries,
    N_max: int,
    alpha_list: Sequence[float],
    params: SpaceParams,
    *,
    monotone_tol: float = 1e-12,
) -> ApproximantSweep:
    table = {}
    limits, noninc, strict = {}, {}, {}
    failure = {}
    degrees = list(range(N_max + 1))
    for alpha in alpha_list:
        p = params.with_alpha(alpha)
        seq = []
        for N in degrees:
            try:
                res = optimal_approximant(f, N, p)
            except IllConditionedBasis as exc:
                log.warning("alpha=%g: %s", alpha, exc)
                failure[alpha] = exc.degree_reached
                break
            table[(alpha, N)] = res.dist_sq
            seq.append(res.dist_sq)
        diffs = np.diff(seq)
        scale = max(seq, default=1.0)
        noninc[alpha] = bool(np.all(diffs <= monotone_tol * scale))
        strict[alpha] = bool(np.all(diffs < -monotone_tol * scale))
        limits[alpha] = aitken_limit(seq) if seq else math.nan
    return ApproximantSweep(
        list(alpha_list), degrees, table, limits, noninc, strict, failure or None
    )


@dataclass
class DilationResult:
    value: float
    truncation_degree: int
    converged: bool


def dilation_quotient_norm(
    f: TruncatedPowerSeries,
    r: float,
    params: SpaceParams,
    D: Optional[int] = None,
    *,
    rel_tol: float = 1e-10,
    max_degree: int = MAX_ADAPTIVE_DEGREE,
) -> DilationResult:
    """Like :func:`dilation_norm` but also reports the truncation used."""
    if not 0.0 < r < 1.0:
        raise InvalidInput(f"dilation radius must lie in (0, 1), got {r}")
    fr = dilate(f, r)
    # Work with a_k * sqrt(w(k)) throughout: the raw coefficients of f/f_r
    # overflow long before the tail has decayed when r is close to 1.
    half_log_w = lambda k: 0.5 * params.log_weight(k)  # noqa: E731
    if D is not None:
        total = 0.0
        for d, shell in quotient_shells(f, fr, half_log_w):
            if d > D:
                break
            total += sum(abs(c) ** 2 for c in shell.values())
        return DilationResult(total, D, True)
    h, converged = adaptive_quotient(
        f, fr, log_scale=half_log_w, rel_tol=rel_tol, max_degree=max_degree
    )
    total = sum(abs(c) ** 2 for _, c in h.items())
    return DilationResult(total, h.truncation_degree, converged)


def dilation_norm(
    f: TruncatedPowerSeries,
    r: float,
    params: SpaceParams,
    D: Optional[int] = None,
    **kwargs,
) -> float:
    """Squared D_alpha norm of ``f / f_r`` with ``f_r(z) = f(r z)``.

    With ``D=None`` the quotient is truncated adaptively; if its tail has not
    decayed by ``max_degree`` a RuntimeWarning is issued and the partial value
    returned.
    """
    res = dilation_quotient_norm(f, r, params, D, **kwargs)
    if not res.converged:
        warnings.warn(
            f"f/f_r tail not converged at degree {res.truncation_degree} (r={r}); partial value",
            RuntimeWarning,
            stacklevel=2,
        )
    return res.value


BOUNDED, GROWING, INCONCLUSIVE = "BOUNDED", "GROWING", "INCONCLUSIVE"


def boundedness_verdict(values: Sequence[float], bounded_ratio=3.0, growing_ratio=10.0) -> str:
    """BOUNDED if max/min <= bounded_ratio, GROWING if last/first >= growing_ratio."""
    lo, hi = min(values), max(values)
    if hi <= bounded_ratio * lo:
        return BOUNDED
    if values[-1] >= growing_ratio * values[0]:
        return GROWING
    return INCONCLUSIVE


@dataclass
class DilationSweep:
    alphas: list
    radii: list
    table: dict  # (alpha, r) -> DilationResult
    verdicts: dict  # alpha -> verdict
    bounded_ratio: float = 3.0
    growing_ratio: float = 10.0

    def values(self, alpha: float) -> list[float]:
        return [self.table[(alpha, r)].value for r in self.radii]

    def rows(self):
        return [
            {
                "alpha": a,
                "r": r,
                "norm_sq": self.table[(a, r)].value,
                "truncation_degree": self.table[(a, r)].truncation_degree,
                "converged": self.table[(a, r)].converged,
                "verdict": self.verdicts[a],
            }
            for a in self.alphas
            for r in self.radii
        ]


def dilation_sweep(
    f: TruncatedPowerSeries,
    r_list: Sequence[float],
    alpha_list: Sequence[float],
    params: SpaceParams,
    *,
    bounded_ratio: float = 3.0,
    growing_ratio: float = 10.0,
    max_degree: int = MAX_ADAPTIVE_DEGREE,
) -> DilationSweep:
    table = {}
    verdicts = {}
    for alpha in alpha_list:
        p = params.with_alpha(alpha)
        vals = []
        for r in r_list:
            res = dilation_quotient_norm(f, r, p, max_degree=max_degree)
            if not res.converged:
                log.warning("alpha=%g r=%g: quotient tail not converged", alpha, r)
            table[(alpha, r)] = res
            vals.append(res.value)
        verdicts[alpha] = boundedness_verdict(vals, bounded_ratio, growing_ratio)
    return DilationSweep(
        list(alpha_list), list(r_list), table, verdicts, bounded_ratio, growing_ratio
    )
