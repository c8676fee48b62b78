"""Truncated multivariate power series with complex coefficients.

Coefficients are stored sparsely as a map from multi-index (a plain tuple of
nonnegative ints) to complex. Every iteration over a series runs in
graded-lexicographic order: by total degree first, then lexicographically with
higher powers of earlier variables first, so ``(1, 0)`` precedes ``(0, 1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Callable, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateDenominator, DimensionMismatch, InvalidInput

MultiIndex = Tuple[int, ...]

# Default ceiling for adaptive division.  The quotients f/f_r we care about are
# supported on a thin set, so deep truncations are cheap.
MAX_ADAPTIVE_DEGREE = 50_000


def degree(k: MultiIndex) -> int:
    return sum(k)


def mi_factorial(k: MultiIndex) -> int:
    return math.prod(math.factorial(e) for e in k)


def graded_key(k: MultiIndex):
    """Sort key realising the graded-lex order."""
    return (sum(k), tuple(-e for e in k))


def enumerate_multiindices(n: int, D: int) -> list[MultiIndex]:
    """All multi-indices in ``n`` variables with ``|k| <= D``, graded-lex ordered.

    The result has ``C(n + D, n)`` entries.
    """
    if n < 1 or D < 0:
        raise InvalidInput(f"need n >= 1 and D >= 0, got n={n}, D={D}")
    out: list[MultiIndex] = []
    for d in range(D + 1):
        out.extend(_shell(n, d))
    return out


def _shell(n: int, d: int) -> list[MultiIndex]:
    # Stars and bars: bar positions in decreasing-first-entry order give the
    # lexicographically descending sequence directly.
    shell = []
    for bars in combinations(range(d + n - 1), n - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(d + n - 1 - prev - 1)
        shell.append(tuple(parts))
    shell.sort(key=graded_key)
    return shell


def _check_index(k, n: int) -> MultiIndex:
    k = tuple(int(e) for e in k)
    if len(k) != n or any(e < 0 for e in k):
        raise InvalidInput(f"multi-index {k} is not a valid index in {n} variables")
    return k


@dataclass(frozen=True, eq=False)
class TruncatedPowerSeries:
    """Power series ``sum a_k z^k`` known up to total degree ``truncation_degree``.

    Absent keys mean a zero coefficient; exact zeros are dropped on construction.
    Instances are immutable.
    """

    dimension: int
    truncation_degree: int
    coefficients: Mapping[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        n, D = self.dimension, self.truncation_degree
        if n < 1:
            raise InvalidInput(f"dimension must be >= 1, got {n}")
        if D < 0:
            raise InvalidInput(f"truncation degree must be >= 0, got {D}")
        clean = {}
        for k, a in self.coefficients.items():
            k = _check_index(k, n)
            if sum(k) > D:
                raise InvalidInput(f"key {k} exceeds truncation degree {D}")
            a = complex(a)
            if a != 0:
                clean[k] = clean.get(k, 0j) + a
        ordered = {k: clean[k] for k in sorted(clean, key=graded_key)}
        object.__setattr__(self, "coefficients", MappingProxyType(ordered))

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, n: int, value: complex = 1.0, D: int = 0) -> "TruncatedPowerSeries":
        return cls(n, D, {(0,) * n: value})

    @classmethod
    def zero(cls, n: int, D: int = 0) -> "TruncatedPowerSeries":
        return cls(n, D, {})

    @classmethod
    def monomial(cls, n: int, k: Sequence[int], value: complex = 1.0) -> "TruncatedPowerSeries":
        k = _check_index(k, n)
        return cls(n, sum(k), {k: value})

    @classmethod
    def variable(cls, n: int, i: int) -> "TruncatedPowerSeries":
        """The coordinate function ``z_i`` (1-based, as in the expression grammar)."""
        k = [0] * n
        k[i - 1] = 1
        return cls.monomial(n, k)

    # -- inspection -------------------------------------------------------

    def items(self):
        return self.coefficients.items()

    def __getitem__(self, k) -> complex:
        return self.coefficients.get(tuple(k), 0j)

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def polynomial_degree(self) -> int:
        """Largest ``|k|`` with a nonzero coefficient, or -1 for the zero series."""
        return max((sum(k) for k in self.coefficients), default=-1)

    @property
    def constant_term(self) -> complex:
        return self[(0,) * self.dimension]

    def truncate(self, D: int) -> "TruncatedPowerSeries":
        return TruncatedPowerSeries(
            self.dimension, D, {k: a for k, a in self.items() if sum(k) <= D}
        )

    def __eq__(self, other):
        if not isinstance(other, TruncatedPowerSeries):
            return NotImplemented
        if self.dimension != other.dimension:
            return False
        D = min(self.truncation_degree, other.truncation_degree)
        mine = {k: a for k, a in self.items() if sum(k) <= D}
        theirs = {k: a for k, a in other.items() if sum(k) <= D}
        return mine == theirs

    __hash__ = None

    def __repr__(self):
        from .parser import format_series

        return (
            f"TruncatedPowerSeries(n={self.dimension}, D={self.truncation_degree}, "
            f"{format_series(self)!r})"
        )

    # -- arithmetic sugar -------------------------------------------------

    def _coerce(self, other) -> "TruncatedPowerSeries":
        if isinstance(other, TruncatedPowerSeries):
            if other.dimension != self.dimension:
                raise DimensionMismatch(
                    f"dimensions differ: {self.dimension} vs {other.dimension}"
                )
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return TruncatedPowerSeries.constant(self.dimension, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coefficients)
        for k, b in other.items():
            out[k] = out.get(k, 0j) + b
        D = max(self.truncation_degree, other.truncation_degree)
        return TruncatedPowerSeries(self.dimension, D, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPowerSeries(
            self.dimension, self.truncation_degree, {k: -a for k, a in self.items()}
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return TruncatedPowerSeries(
                self.dimension,
                self.truncation_degree,
                {k: a * other for k, a in self.items()},
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return multiply(self, other, self.truncation_degree + other.truncation_degree)

    __rmul__ = __mul__

    def __pow__(self, p: int):
        if not isinstance(p, int) or p < 0:
            raise InvalidInput("only nonnegative integer powers are supported")
        result = TruncatedPowerSeries.constant(self.dimension, 1.0)
        base = self
        while p:
            if p & 1:
                result = result * base
            p >>= 1
            if p:
                base = base * base
        return result

    def __call__(self, z):
        return evaluate(self, z)


def _same_dimension(f: TruncatedPowerSeries, g: TruncatedPowerSeries):
    if f.dimension != g.dimension:
        raise DimensionMismatch(f"dimensions differ: {f.dimension} vs {g.dimension}")


def multiply(f: TruncatedPowerSeries, g: TruncatedPowerSeries, D: int) -> TruncatedPowerSeries:
    """Cauchy product truncated at total degree ``D``."""
    _same_dimension(f, g)
    out: dict[MultiIndex, complex] = {}
    g_items = list(g.items())
    for i, a in f.items():
        di = sum(i)
        if di > D:
            break
        for j, b in g_items:
            if di + sum(j) > D:
                break
            k = tuple(x + y for x, y in zip(i, j))
            out[k] = out.get(k, 0j) + a * b
    return TruncatedPowerSeries(f.dimension, D, out)


def radial_derivative(f: TruncatedPowerSeries, times: int = 1) -> TruncatedPowerSeries:
    """Apply ``R = sum_i z_i d/dz_i`` ``times`` times (``a_k -> |k|^times a_k``)."""
    return TruncatedPowerSeries(
        f.dimension,
        f.truncation_degree,
        {k: sum(k) ** times * a for k, a in f.items()},
    )


def dilate(f: TruncatedPowerSeries, r: float) -> TruncatedPowerSeries:
    """Radial dilation ``z -> f(r z)``."""
    if not 0.0 <= r <= 1.0:
        raise InvalidInput(f"dilation radius must lie in [0, 1], got {r}")
    return TruncatedPowerSeries(
        f.dimension,
        f.truncation_degree,
        {k: a * r ** sum(k) for k, a in f.items()},
    )


def quotient_shells(
    f: TruncatedPowerSeries,
    g: TruncatedPowerSeries,
    log_scale: Optional[Callable[[MultiIndex], float]] = None,
) -> Iterator[tuple[int, dict[MultiIndex, complex]]]:
    """Yield ``(d, shell)`` for the degree-``d`` part of ``f/g``, ``d = 0, 1, ...``.

    Graded recursion ``h_k = (f_k - sum_{0 < j <= k} g_j h_{k-j}) / g_0``; only
    keys reachable from ``supp f`` through ``supp g`` are ever visited, so thin
    quotients stay cheap at very high degree. The generator is infinite.

    With ``log_scale`` the shells hold ``h_k * exp(log_scale(k))`` instead of
    ``h_k``. Choosing the log of a norm weight keeps coefficients of order one
    where the raw ones would overflow (``1/(1 - 2 z1 z2)`` has coefficients
    ``2^t``).
    """
    _same_dimension(f, g)
    g0 = g.constant_term
    if g0 == 0:
        raise DegenerateDenominator("denominator has zero constant term")
    g_rest = [(j, b, sum(j)) for j, b in g.items() if sum(j) > 0]
    depth = max((e for _, _, e in g_rest), default=0)
    f_by_degree: dict[int, dict[MultiIndex, complex]] = {}
    for k, a in f.items():
        if log_scale is not None:
            a = a * math.exp(log_scale(k))
        f_by_degree.setdefault(sum(k), {})[k] = a
    shells: dict[int, dict[MultiIndex, complex]] = {}
    d = 0
    while True:
        candidates = set(f_by_degree.get(d, ()))
        for j, _, e in g_rest:
            for s in shells.get(d - e, ()):
                candidates.add(tuple(x + y for x, y in zip(s, j)))
        shell = {}
        for k in sorted(candidates, key=graded_key):
            acc = f_by_degree.get(d, {}).get(k, 0j)
            sk = log_scale(k) if log_scale is not None else 0.0
            for j, b, e in g_rest:
                prev = shells.get(d - e)
                if not prev:
                    continue
                m = tuple(x - y for x, y in zip(k, j))
                h = prev.get(m)
                if h is not None:
                    if log_scale is not None:
                        h = h * math.exp(sk - log_scale(m))
                    acc -= b * h
            acc /= g0
            if acc != 0:
                shell[k] = acc
        shells[d] = shell
        shells.pop(d - depth - 1, None)
        yield d, shell
        d += 1


def divide(
    f: TruncatedPowerSeries,
    g: TruncatedPowerSeries,
    D: Optional[int] = None,
    *,
    rel_tol: float = 1e-10,
    max_degree: int = MAX_ADAPTIVE_DEGREE,
) -> TruncatedPowerSeries:
    """Quotient ``f/g`` as a power series truncated at degree ``D``.

    With ``D=None`` the truncation is chosen adaptively (see
    :func:`adaptive_quotient`) and a :class:`RuntimeWarning` is emitted if the
    tail has not decayed by ``max_degree``.
    """
    if D is None:
        h, converged = adaptive_quotient(f, g, rel_tol=rel_tol, max_degree=max_degree)
        if not converged:
            warnings.warn(
                f"quotient tail not below {rel_tol:g} relative at degree {max_degree}",
                RuntimeWarning,
                stacklevel=2,
            )
        return h
    out = {}
    for d, shell in quotient_shells(f, g):
        if d > D:
            break
        out.update(shell)
    return TruncatedPowerSeries(f.dimension, D, out)


def adaptive_quotient(
    f: TruncatedPowerSeries,
    g: TruncatedPowerSeries,
    *,
    log_scale: Optional[Callable[[MultiIndex], float]] = None,
    rel_tol: float = 1e-10,
    max_degree: int = MAX_ADAPTIVE_DEGREE,
) -> tuple[TruncatedPowerSeries, bool]:
    """Grow the truncation of ``f/g`` until the remaining tail is negligible.

    The controlled quantity is ``sum |c_k|^2`` over the (optionally scaled, see
    :func:`quotient_shells`) coefficients, so passing half the log of a norm
    weight controls that norm. Shell contributions are summed in blocks; the
    tail is estimated from the ratio of consecutive blocks as a geometric
    remainder and must fall below ``rel_tol`` times the running total.

    Returns the (scaled) coefficients and whether the tail criterion was met
    before ``max_degree``.
    """
    depth = max(g.polynomial_degree, 1)
    block = 4 * depth
    f_deg = max(f.polynomial_degree, 0)
    # Blocks start after the transient set by f's own terms, so a large
    # constant term cannot masquerade as fast decay.
    warmup = f_deg + depth
    out: dict[MultiIndex, complex] = {}
    total = 0.0
    blocks: list[float] = []
    current = 0.0
    zero_run = 0
    converged = False
    last = 0
    for d, shell in quotient_shells(f, g, log_scale):
        last = d
        out.update(shell)
        contrib = sum(a.real * a.real + a.imag * a.imag for a in shell.values())
        total += contrib
        zero_run = zero_run + 1 if not shell else 0
        # Shells at d depend only on shells d-1..d-depth and f, so a run of
        # `depth` empty shells past deg f means every later shell is empty.
        if d > f_deg and zero_run >= depth:
            converged = True
            break
        if d > warmup:
            current += contrib
            if (d - warmup) % block == 0:
                blocks.append(current)
                current = 0.0
                if len(blocks) >= 3 and blocks[-3] > blocks[-2] > blocks[-1]:
                    rho = max(blocks[-1] / blocks[-2], blocks[-2] / blocks[-3])
                    tail = blocks[-1] * rho / (1.0 - rho)
                    if tail <= rel_tol * total:
                        converged = True
                        break
        if d >= max_degree:
            break
    return TruncatedPowerSeries(f.dimension, last, out), converged


def evaluate(f: TruncatedPowerSeries, z) -> complex | np.ndarray:
    """Evaluate ``sum a_k z^k`` at one point (shape ``(n,)``) or a batch ``(m, n)``."""
    pts = np.asarray(z, dtype=complex)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != f.dimension:
        raise DimensionMismatch(
            f"point has {pts.shape[-1]} coordinates, series has dimension {f.dimension}"
        )
    total = np.zeros(pts.shape[0], dtype=complex)
    # power tables per coordinate, grown lazily
    powers: list[list[np.ndarray]] = [[np.ones(pts.shape[0], dtype=complex)] for _ in range(f.dimension)]
    for k, a in f.items():
        term = np.full(pts.shape[0], a, dtype=complex)
        for i, e in enumerate(k):
            if e:
                table = powers[i]
                while len(table) <= e:
                    table.append(table[-1] * pts[:, i])
                term = term * table[e]
        total += term
    return complex(total[0]) if single else total
