"""Sampled and quadrature checks of the estimates behind the cyclicity threshold.

Covered here: boundary zero sets (a point, a complex-tangential circle or
torus) with their distance functions, the corner model integral whose
behaviour as ``r -> 1`` separates ``alpha <= alpha_c`` from ``alpha >
alpha_c``, the pointwise bound on ``R^l(g/g_r)``, the two-sided peak
inequalities, Lojasiewicz exponents and domination, the Monte Carlo Bergman
integral, and sup norms of radial derivatives.

The functions ``1 - z1``, ``1 - 2 z1 z2`` and ``1 - n^(n/2) z1...zn`` are
*model* peak functions: they vanish exactly on the corresponding set and have
positive real part elsewhere on the closed ball, so they satisfy the same
inequalities. Nothing here claims they coincide with any particular peak
function from the literature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import (
    DegenerateFit,
    InvalidInput,
    NotAPeakFunction,
    QuadratureError,
)
from .norms import bergman_norm_sq
from .quadrature import graded_rule, mirrored, tensor_sum
from .sampling import mc_ball_chunks, qmc_closed_ball
from .series import TruncatedPowerSeries, dilate, evaluate, radial_derivative

POINT, CIRCLE, TORUS = "point", "circle", "torus"


@dataclass(frozen=True)
class ManifoldSpec:
    """A compact complex-tangential submanifold of the unit sphere in C^n.

    * ``point``:  ``e1``; ``m = 0``.
    * ``circle``: ``theta -> (e^{i theta}, e^{-i theta}, 0, ...)/sqrt 2``; ``m = 1``.
    * ``torus``:  ``(e^{i t_1}, ..., e^{i t_{n-1}}, e^{-i(t_1+...+t_{n-1})})/sqrt n``;
      ``m = n - 1``, the largest dimension a complex-tangential manifold can have.
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (POINT, CIRCLE, TORUS):
            raise InvalidInput(f"unsupported manifold kind {self.kind!r}")
        if self.kind == POINT and self.n < 1:
            raise InvalidInput("point manifold needs n >= 1")
        if self.kind in (CIRCLE, TORUS) and self.n < 2:
            raise InvalidInput(f"{self.kind} manifold needs n >= 2")

    @property
    def m(self) -> int:
        return {POINT: 0, CIRCLE: 1, TORUS: self.n - 1}[self.kind]

    @property
    def critical_exponent(self) -> float:
        return (2 * self.n - self.m) / 2

    def parametrize(self, thetas) -> np.ndarray:
        """Points of M for angles of shape ``(count, m)``; returns ``(count, n)``."""
        t = np.atleast_2d(np.asarray(thetas, dtype=float))
        count = t.shape[0]
        z = np.zeros((count, self.n), dtype=complex)
        if self.kind == POINT:
            z[:, 0] = 1.0
        elif self.kind == CIRCLE:
            z[:, 0] = np.exp(1j * t[:, 0]) / math.sqrt(2)
            z[:, 1] = np.exp(-1j * t[:, 0]) / math.sqrt(2)
        else:
            s = math.sqrt(self.n)
            z[:, :-1] = np.exp(1j * t[:, : self.n - 1]) / s
            z[:, -1] = np.exp(-1j * t[:, : self.n - 1].sum(axis=1)) / s
        return z

    def tangent_vectors(self, thetas) -> np.ndarray:
        """``d p / d theta_j`` with shape ``(count, m, n)``."""
        t = np.atleast_2d(np.asarray(thetas, dtype=float))
        p = self.parametrize(t)
        out = np.zeros((t.shape[0], self.m, self.n), dtype=complex)
        if self.kind == CIRCLE:
            out[:, 0, 0] = 1j * p[:, 0]
            out[:, 0, 1] = -1j * p[:, 1]
        elif self.kind == TORUS:
            for j in range(self.m):
                out[:, j, j] = 1j * p[:, j]
                out[:, j, -1] = -1j * p[:, -1]
        return out

    def random_angles(self, count: int, seed: int = 0) -> np.ndarray:
        if self.m == 0:
            return np.zeros((count, 0))
        return 2 * math.pi * np.random.default_rng(seed).random((count, self.m))

    def model_peak_function(self) -> TruncatedPowerSeries:
        """Polynomial vanishing on M, with positive real part elsewhere on the closed ball."""
        n = self.n
        if self.kind == POINT:
            k = (1,) + (0,) * (n - 1)
            return TruncatedPowerSeries(n, 1, {(0,) * n: 1.0, k: -1.0})
        if self.kind == CIRCLE:
            k = (1, 1) + (0,) * (n - 2)
            return TruncatedPowerSeries(n, 2, {(0,) * n: 1.0, k: -2.0})
        return TruncatedPowerSeries(n, n, {(0,) * n: 1.0, (1,) * n: -(n ** (n / 2))})

    def distance(self, z) -> np.ndarray:
        """Euclidean distance from each point of ``z`` (shape ``(count, n)``) to M."""
        pts = np.atleast_2d(np.asarray(z, dtype=complex))
        if pts.shape[1] != self.n:
            raise InvalidInput(f"points have {pts.shape[1]} coordinates, manifold lives in C^{self.n}")
        if self.kind == POINT:
            e1 = np.zeros(self.n)
            e1[0] = 1.0
            return np.linalg.norm(pts - e1, axis=1)
        sq = np.sum(np.abs(pts) ** 2, axis=1)
        if self.kind == CIRCLE:
            best = math.sqrt(2) * np.abs(pts[:, 0] + np.conj(pts[:, 1]))
        else:
            best = 2.0 / math.sqrt(self.n) * _torus_max_correlation(pts)
        return np.sqrt(np.maximum(sq + 1.0 - best, 0.0))

    def sampled_distance(self, z, grid: int = 4096) -> np.ndarray:
        """Distance by brute-force minimisation over an angle grid (oracle for tests)."""
        pts = np.atleast_2d(np.asarray(z, dtype=complex))
        if self.m == 0:
            return self.distance(pts)
        per_axis = max(2, int(round(grid ** (1.0 / self.m))))
        axes = [np.arange(per_axis) * 2 * math.pi / per_axis] * self.m
        thetas = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.m)
        mpts = self.parametrize(thetas)
        d = np.linalg.norm(pts[:, None, :] - mpts[None, :, :], axis=2)
        return d.min(axis=1)

    def tangential_defect(self, thetas) -> dict:
        """How far sampled points are from being on the sphere and complex tangential.

        ``hermitian`` is ``max |<v, p>|`` over tangent vectors ``v``; it vanishes
        exactly when each ``v`` is orthogonal to both the normal ``p`` and ``i p``.
        """
        p = self.parametrize(thetas)
        radius = float(np.max(np.abs(np.linalg.norm(p, axis=1) - 1.0)))
        if self.m == 0:
            return {"radius": radius, "hermitian": 0.0}
        v = self.tangent_vectors(thetas)
        herm = np.abs(np.einsum("cjn,cn->cj", v, np.conj(p)))
        return {"radius": radius, "hermitian": float(herm.max())}


def _torus_max_correlation(z: np.ndarray, grid: int = 48, newton_steps: int = 30) -> np.ndarray:
    """``max_t Re(sum_{j<n} z_j e^{-i t_j} + z_n e^{i sum t})`` per point.

    Coarse grid start followed by batched Newton ascent; the better of the
    two values is kept.
    """
    count, n = z.shape
    m = n - 1
    axes = [np.arange(grid) * 2 * math.pi / grid] * m
    cand = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m)

    def objective(zz, t):
        s = t.sum(axis=-1)
        return np.real(
            np.sum(zz[..., :m] * np.exp(-1j * t), axis=-1) + zz[..., m] * np.exp(1j * s)
        )

    best_t = np.empty((count, m))
    best_v = np.full(count, -np.inf)
    step = max(1, 200_000 // len(cand))
    for start in range(0, count, step):
        zz = z[start : start + step, None, :]
        vals = objective(zz, cand[None, :, :])
        idx = vals.argmax(axis=1)
        best_t[start : start + step] = cand[idx]
        best_v[start : start + step] = vals[np.arange(len(idx)), idx]

    t = best_t.copy()
    for _ in range(newton_steps):
        e = np.exp(-1j * t) * z[:, :m]
        tail = z[:, m] * np.exp(1j * t.sum(axis=1))
        grad = np.imag(e) - np.imag(tail)[:, None]
        hess = -np.real(tail)[:, None, None] * np.ones((m, m)) - np.real(e)[:, :, None] * np.eye(m)
        try:
            delta = np.linalg.solve(hess, -grad[..., None])[..., 0]
        except np.linalg.LinAlgError:
            break
        t = t + np.clip(delta, -0.5, 0.5)
    newton_v = objective(z, t)
    return np.maximum(best_v, newton_v)


def near_manifold_samples(
    M: ManifoldSpec,
    count: int,
    dist_min: float = 1e-4,
    dist_max: float = 0.3,
    seed: int = 0,
) -> np.ndarray:
    """Quasi-random interior points whose distance to M lies in ``[dist_min, dist_max]``.

    A point of M is displaced in a quasi-random direction by a log-uniform
    amount; points outside the open ball or outside the distance band are
    discarded until ``count`` remain.
    """
    n = M.n
    dims = M.m + 2 * n + 1
    engine = qmc.Halton(d=dims, scramble=True, seed=seed)
    out = []
    have = 0
    lo, hi = math.log(dist_min), math.log(dist_max)
    for _ in range(1000):
        u = engine.random(max(4 * count, 1024))
        theta = 2 * math.pi * u[:, : M.m]
        base = M.parametrize(theta)
        d = ndtri(np.clip(u[:, M.m : M.m + 2 * n], 1e-12, 1 - 1e-12))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        rho = np.exp(lo + (hi - lo) * u[:, -1])
        z = base + rho[:, None] * (d[:, :n] + 1j * d[:, n:])
        inside = np.sum(np.abs(z) ** 2, axis=1) < 1.0
        z = z[inside]
        dist = M.distance(z)
        z = z[(dist >= dist_min) & (dist <= dist_max)]
        out.append(z)
        have += len(z)
        if have >= count:
            break
    pts = np.concatenate(out)[:count]
    if len(pts) < count:
        raise InvalidInput(f"could only place {len(pts)} of {count} samples near the manifold")
    return pts


# ---------------------------------------------------------------------------
# Model integral


@dataclass(frozen=True)
class ModelIntegralSpec:
    """Parameters of the corner model integral.

    Integration variables: ``x in (0,1)^m`` (integrand independent of it),
    ``y in (0,1)^(2n-m-2)``, ``v in (-1,1)``, ``u in (0,1)``.
    """

    n: int
    m: int
    alpha: float
    l: int
    r: float

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.m <= 2 * self.n - 2:
            raise InvalidInput(f"need 0 <= m <= 2n-2, got n={self.n}, m={self.m}")
        if self.gamma <= 0:
            raise InvalidInput(f"need 2l - alpha > 0, got l={self.l}, alpha={self.alpha}")
        if not 0.0 < self.r < 1.0:
            raise InvalidInput(f"r must lie in (0, 1), got {self.r}")

    @property
    def gamma(self) -> float:
        return 2 * self.l - self.alpha

    @property
    def y_dims(self) -> int:
        return 2 * self.n - self.m - 2

    @property
    def dimensions(self) -> int:
        return self.m + self.y_dims + 1 + 1

    @property
    def corner_exponent(self) -> float:
        """Power of ``1 - r`` produced by the corner scaling ``u, v ~ 1-r``, ``y ~ sqrt(1-r)``."""
        return (2 * self.n - self.m) / 2 - self.alpha


@dataclass
class QuadratureResult:
    value: float
    history: list  # estimates per refinement level
    rel_change: float
    nodes: int


# (panels per decade, Gauss points per panel)
_LEVELS = [(2, 6), (3, 8), (4, 10), (5, 12), (6, 14)]
_MAX_NODES = 400_000_000


def model_integral(
    spec: ModelIntegralSpec,
    *,
    rel_tol: float = 1e-4,
    full_v: bool = False,
    levels: Sequence = _LEVELS,
) -> QuadratureResult:
    """``(1-r)^2 * int u^(2l-alpha-1) / ((1-r) + u + |v| + |y|^2)^(2l+2)``.

    The x-integral over ``(0,1)^m`` is exactly 1 and is not evaluated. By
    symmetry in ``v`` only ``(0,1)`` is integrated and doubled, unless
    ``full_v`` is set. Each coordinate gets a geometrically graded rule
    reaching three decades below its corner scale (``1-r`` for ``u, v``,
    ``sqrt(1-r)`` for ``y``); refinement raises panels per decade and nodes
    per panel until successive estimates agree to ``rel_tol``.
    """
    s = 1.0 - spec.r
    power = 2 * spec.l + 2
    g1 = spec.gamma - 1.0

    def integrand(u, v, *ys):
        t = s + u + np.abs(v)
        for y in ys:
            t = t + y * y
        return u**g1 / t**power

    history = []
    rel = math.inf
    nodes = 0
    for ppd, q in levels:
        h_uv = 1e-3 * s
        h_y = 1e-3 * math.sqrt(s)
        ru = graded_rule(h_uv, max(2, int(math.ceil(-math.log10(h_uv) * ppd))), q)
        rv = graded_rule(h_uv, max(2, int(math.ceil(-math.log10(h_uv) * ppd))), q)
        ry = graded_rule(h_y, max(2, int(math.ceil(-math.log10(h_y) * ppd))), q)
        if full_v:
            rv = mirrored(*rv)
            v_factor = 1.0
        else:
            v_factor = 2.0
        rules = [ru, rv] + [ry] * spec.y_dims
        nodes = int(np.prod([len(r[0]) for r in rules]))
        if nodes > _MAX_NODES:
            break
        est = s * s * v_factor * tensor_sum(integrand, rules)
        history.append(est)
        if len(history) >= 2:
            rel = abs(history[-1] - history[-2]) / abs(history[-1])
            if rel <= rel_tol:
                return QuadratureResult(est, history, rel, nodes)
    best = history[-1] if history else math.nan
    raise QuadratureError(
        f"model integral not converged: relative change {rel:.2e} > {rel_tol:g}",
        best_estimate=best,
    )


# ---------------------------------------------------------------------------
# Inequality reports


@dataclass
class InequalityReport:
    """Outcome of a sampled inequality check.

    ``min_ratio``/``max_ratio`` bound the tested ratio; ``passed`` holds iff
    the minimum is positive and the maximum finite. ``constants`` carries the
    empirical constants, ``details`` anything check-specific.
    """

    sample_count: int
    min_ratio: float
    max_ratio: float
    constants: dict
    passed: bool
    skipped: int = 0
    details: dict = field(default_factory=dict)


def _radial_quotient_numerator(g: TruncatedPowerSeries, gr: TruncatedPowerSeries, l: int):
    """Polynomial ``P_l`` with ``R^l(g/g_r) = P_l / g_r^(l+1)``.

    ``P_0 = g`` and ``P_{j+1} = g_r R P_j - (j+1) P_j R g_r`` (quotient rule
    for the derivation R).
    """
    P = g
    Rgr = radial_derivative(gr)
    for j in range(l):
        P = gr * radial_derivative(P) - (j + 1) * (P * Rgr)
    return P


def rineq_check(
    g: TruncatedPowerSeries,
    l: int,
    r_list: Sequence[float],
    sample_points,
) -> InequalityReport:
    """Sample ``|R^l(g/g_r)(z)| |g_r(z)|^(l+1) / (1-r)`` over points and radii.

    The empirical constant ``C_l(r)`` is the maximum over points for each r.
    The tested ratio is ``C_l(r)`` across r, and ``details["stability"]`` is
    ``max_r C_l / min_r C_l``.
    """
    if l < 1:
        raise InvalidInput("l must be a positive integer")
    z = np.atleast_2d(np.asarray(sample_points, dtype=complex))
    per_r = {}
    skipped = 0
    for r in r_list:
        if not 0.0 < r < 1.0:
            raise InvalidInput(f"r must lie in (0, 1), got {r}")
        gr = dilate(g, r)
        P = _radial_quotient_numerator(g, gr, l)
        grv = evaluate(gr, z)
        ok = np.abs(grv) > 1e-300
        skipped += int((~ok).sum())
        Rl = evaluate(P, z[ok]) / grv[ok] ** (l + 1)
        ratio = np.abs(Rl) * np.abs(grv[ok]) ** (l + 1) / (1.0 - r)
        per_r[r] = float(ratio.max()) if ratio.size else math.nan
    vals = np.array(list(per_r.values()))
    lo, hi = float(vals.min()), float(vals.max())
    stability = hi / lo if lo > 0 else math.inf
    return InequalityReport(
        sample_count=len(z),
        min_ratio=lo,
        max_ratio=hi,
        constants={"C_l": hi},
        passed=bool(lo > 0 and math.isfinite(hi)),
        skipped=skipped,
        details={"per_r": per_r, "stability": stability, "l": l},
    )


def peak_check(
    g: TruncatedPowerSeries,
    M: ManifoldSpec,
    sample_points,
    *,
    dist_max: float = 0.3,
) -> InequalityReport:
    """Estimate ``c = min |g|/dist^2``, ``c' = max |g|/dist`` and ``c_re = min Re g / dist^2``.

    Uses interior samples with ``0 < dist(z, M) <= dist_max``. Any such sample
    with ``Re g <= 0`` raises :class:`NotAPeakFunction`. ``details`` also
    records the largest ``|g|`` found on M itself.
    """
    z = np.atleast_2d(np.asarray(sample_points, dtype=complex))
    inside = np.sum(np.abs(z) ** 2, axis=1) < 1.0
    dist = M.distance(z)
    keep = inside & (dist > 0) & (dist <= dist_max)
    z, dist = z[keep], dist[keep]
    if len(z) == 0:
        raise InvalidInput("no samples within the distance band")
    gv = evaluate(g, z)
    bad = gv.real <= 0
    if bad.any():
        i = int(np.argmax(bad))
        raise NotAPeakFunction(f"Re g = {gv.real[i]:.3e} <= 0 at a point at distance {dist[i]:.3e} from M")
    lower = np.abs(gv) / dist**2
    upper = np.abs(gv) / dist
    re_lower = gv.real / dist**2
    on_m = M.parametrize(M.random_angles(256, seed=7))
    c, cp, cre = float(lower.min()), float(upper.max()), float(re_lower.min())
    return InequalityReport(
        sample_count=len(z),
        min_ratio=c,
        max_ratio=cp,
        constants={"c": c, "c_prime": cp, "c_re": cre},
        passed=bool(c > 0 and math.isfinite(cp) and cre > 0),
        skipped=int((~keep).sum()),
        details={
            "max_abs_g_on_M": float(np.abs(evaluate(g, on_m)).max()),
            "min_dist": float(dist.min()),
            "max_dist": float(dist.max()),
        },
    )


@dataclass
class LojasiewiczFit:
    slope: float
    intercept: float
    exponent: int
    constant: float
    holds: bool
    sample_count: int


def lojasiewicz_estimate(
    f: TruncatedPowerSeries,
    M: ManifoldSpec,
    sample_points,
    *,
    dist_range: tuple = (1e-4, 1e-1),
    exponent: Optional[int] = None,
) -> LojasiewiczFit:
    """Fit ``log|f| ~ slope * log dist + b`` and certify ``|f| >= C dist^l`` on the samples.

    ``l`` defaults to the fitted slope rounded up; ``C`` is the smallest
    observed ``|f|/dist^l``, so the bound holds on every sample by
    construction and ``holds`` reports whether ``C > 0``.
    """
    z = np.atleast_2d(np.asarray(sample_points, dtype=complex))
    dist = M.distance(z)
    lo, hi = dist_range
    keep = (dist >= lo) & (dist <= hi)
    z, dist = z[keep], dist[keep]
    fv = np.abs(evaluate(f, z))
    nonzero = fv > 0
    if nonzero.sum() < 10:
        raise DegenerateFit(f"only {int(nonzero.sum())} usable samples in the distance band")
    x = np.log(dist[nonzero])
    y = np.log(fv[nonzero])
    if x.max() - x.min() < math.log(10.0):
        raise DegenerateFit("sampled distances span less than one decade")
    slope, intercept = np.polyfit(x, y, 1)
    l = exponent if exponent is not None else max(1, int(math.ceil(slope - 1e-9)))
    C = float(np.min(fv / dist**l))
    return LojasiewiczFit(float(slope), float(intercept), l, C, bool(C > 0), int(len(z)))


@dataclass
class DominationResult:
    passed: bool
    worst_ratio: float  # max of scale*|g|^N / |f|
    power: int
    scale: float
    smallest_workable_power: Optional[int]
    lojasiewicz_exponent: Optional[int] = None


def _rounding_bound(p: TruncatedPowerSeries, z: np.ndarray) -> np.ndarray:
    """Bound on the floating-point error of ``evaluate(p, z)``.

    Summing ``len(p)`` products of at most ``deg p`` factors loses at most
    ``(deg + len + 1) eps`` relative to ``sum |a_k| |z^k|``; a factor 4 is
    kept in reserve.
    """
    absolute = TruncatedPowerSeries(p.dimension, p.truncation_degree, {k: abs(a) for k, a in p.items()})
    gamma = 4 * (max(p.polynomial_degree, 0) + len(p) + 1) * np.finfo(float).eps
    return gamma * np.abs(evaluate(absolute, np.abs(z)))


def domination_check(
    g: TruncatedPowerSeries,
    f: TruncatedPowerSeries,
    sample_points,
    power: int = 1,
    *,
    scale: float = 1.0,
    max_power: int = 8,
    lojasiewicz_exponent: Optional[int] = None,
    rtol: float = 1e-12,
) -> DominationResult:
    """Check ``scale * |g|^N <= |f|`` at every sample.

    A sample only counts as a violation if it survives the rounding error of
    both evaluations (see :func:`_rounding_bound`) plus ``rtol`` relative
    slack; near a common zero set the expanded polynomials lose most of their
    digits, so a fixed relative tolerance is not enough. ``worst_ratio`` is
    the raw maximum of ``scale * |g|^N / |f|``. Also scans ``N = 1..max_power``
    for the smallest power that works on these samples.
    """
    z = np.atleast_2d(np.asarray(sample_points, dtype=complex))
    gv = np.abs(evaluate(g, z))
    fv = np.abs(evaluate(f, z))
    g_lo = np.maximum(gv - _rounding_bound(g, z), 0.0)
    f_hi = (fv + _rounding_bound(f, z)) * (1 + rtol)
    both_zero = (gv == 0) & (fv == 0)
    gv, fv, g_lo, f_hi = gv[~both_zero], fv[~both_zero], g_lo[~both_zero], f_hi[~both_zero]

    def worst(N):
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(np.max(scale * gv**N / fv)) if len(fv) else 0.0

    def holds(N):
        return bool(np.all(scale * g_lo**N <= f_hi))

    smallest = next((N for N in range(1, max_power + 1) if holds(N)), None)
    return DominationResult(
        passed=holds(power),
        worst_ratio=worst(power),
        power=power,
        scale=scale,
        smallest_workable_power=smallest,
        lojasiewicz_exponent=lojasiewicz_exponent,
    )


# ---------------------------------------------------------------------------
# Monte Carlo and sup norms


@dataclass
class MonteCarloEstimate:
    mean: float
    stderr: float
    sample_count: int
    seed: int

    def agrees_with(self, value: float, sigmas: float = 4.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.stderr


def monte_carlo_bergman_norm(
    f: TruncatedPowerSeries, c: float, sample_count: int, seed: int = 0
) -> MonteCarloEstimate:
    """Estimate ``int_B (1-|z|^2)^c |f|^2 dv`` (``v(B) = 1``) from uniform ball samples."""
    if sample_count < 100:
        raise InvalidInput("Monte Carlo needs at least 100 samples")
    if c <= -1:
        raise InvalidInput(f"Bergman exponent c={c} <= -1 gives a divergent integral")
    s1 = 0.0
    s2 = 0.0
    for z in mc_ball_chunks(f.dimension, sample_count, seed):
        w = (1.0 - np.sum(np.abs(z) ** 2, axis=1)) ** c
        vals = w * np.abs(evaluate(f, z)) ** 2
        s1 += float(vals.sum())
        s2 += float((vals * vals).sum())
    mean = s1 / sample_count
    var = max(s2 / sample_count - mean * mean, 0.0)
    return MonteCarloEstimate(mean, math.sqrt(var / (sample_count - 1)), sample_count, seed)


def bergman_reference(f: TruncatedPowerSeries, c: float) -> float:
    """Exact value of the Monte Carlo target from the monomial weights."""
    return bergman_norm_sq(f, c)


def sup_norm_radial_derivative(
    f: TruncatedPowerSeries, l: int, grid_size: int = 20_000, seed: int = 0
) -> float:
    """Largest ``|R^l f|`` over quasi-random points of the closed ball (half on the sphere)."""
    pts = qmc_closed_ball(f.dimension, grid_size, seed)
    Rf = radial_derivative(f, l)
    return float(np.max(np.abs(evaluate(Rf, pts))))
