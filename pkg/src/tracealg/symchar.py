"""Symmetric-group characters and Formanek's expansion of trace-algebra series.

For d = 2 the degree-k component of the pure series is
``sum_{p>=q, p+q=k} c_{p,q} f_{p,q}`` with
``c_{p,q} = sum_rho theta(rho) chi^{(p,q)}(rho) / z_rho`` and
``theta = sum_{l(mu)<=n} (chi^mu)**2``.  Characters are produced column by
column: the power sum ``p_rho`` expanded in Schur functions has the values
``chi^mu(rho)`` as coefficients, and multiplying by one more power sum ``p_r``
adds r-rim hooks (Murnaghan-Nakayama).  Walking all cycle types as a tree of
nonincreasing part sequences gives every column with one sparse product each.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy import sparse

from .polyrat import TruncSeries

# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        p = tuple(int(x) for x in self.parts if x)
        if any(a < b for a, b in zip(p, p[1:])) or any(x < 0 for x in p):
            p = tuple(sorted((x for x in p if x > 0), reverse=True))
        object.__setattr__(self, "parts", p)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def _as_tuple(p) -> tuple[int, ...]:
    if isinstance(p, Partition):
        return p.parts
    return tuple(sorted((int(x) for x in p if x), reverse=True))


@lru_cache(maxsize=None)
def partitions(k: int, max_len: int | None = None, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Partitions of k in reverse lexicographic order (largest first)."""
    if max_part is None:
        max_part = k
    if k == 0:
        return ((),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(k, max_part), 0, -1):
        for rest in partitions(k - first, None if max_len is None else max_len - 1, first):
            out.append((first,) + rest)
    return tuple(out)


def z_order(rho) -> int:
    """Centralizer order of a permutation of cycle type rho."""
    rho = _as_tuple(rho)
    out = 1
    for r, m in _multiplicities(rho).items():
        out *= r ** m * math.factorial(m)
    return out


def _multiplicities(rho: tuple[int, ...]) -> dict[int, int]:
    m: dict[int, int] = defaultdict(int)
    for r in rho:
        m[r] += 1
    return m


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama on beta sets


def _beta(lam: tuple[int, ...], N: int) -> tuple[int, ...]:
    lam = lam + (0,) * (N - len(lam))
    return tuple(lam[i] + N - 1 - i for i in range(N))


def _from_beta(beta: Sequence[int]) -> tuple[int, ...]:
    b = sorted(beta, reverse=True)
    N = len(b)
    return tuple(x for x in (b[i] - (N - 1 - i) for i in range(N)) if x)


def add_rim_hooks(lam: tuple[int, ...], r: int, N: int) -> list[tuple[tuple[int, ...], int]]:
    """All ``(mu, sign)`` with mu/lam an r-rim hook and ``l(mu) <= N``."""
    beta = _beta(lam, N)
    occupied = set(beta)
    out = []
    for b in beta:
        if b + r in occupied:
            continue
        between = sum(1 for c in beta if b < c < b + r)
        new = [c for c in beta if c != b] + [b + r]
        out.append((_from_beta(new), -1 if between & 1 else 1))
    return out


def remove_rim_hooks(mu: tuple[int, ...], r: int) -> list[tuple[tuple[int, ...], int]]:
    N = len(mu)
    beta = _beta(mu, N)
    occupied = set(beta)
    out = []
    for b in beta:
        if b - r < 0 or b - r in occupied:
            continue
        between = sum(1 for c in beta if b - r < c < b)
        new = [c for c in beta if c != b] + [b - r]
        out.append((_from_beta(new), -1 if between & 1 else 1))
    return out


@lru_cache(maxsize=None)
def _char(mu: tuple[int, ...], rho: tuple[int, ...]) -> int:
    if not rho:
        return 1 if not mu else 0
    r = rho[0]
    total = 0
    for nu, sgn in remove_rim_hooks(mu, r):
        total += sgn * _char(nu, rho[1:])
    return total


def char_value(mu, rho) -> int:
    """chi^mu(rho) by the Murnaghan-Nakayama rule."""
    mu, rho = _as_tuple(mu), _as_tuple(rho)
    if sum(mu) != sum(rho):
        raise ValueError(f"weight mismatch: |{mu}| != |{rho}|")
    return _char(mu, rho)


def kronecker_coeff(lam, mu, nu) -> int:
    """Multiplicity of chi^nu in chi^lam * chi^mu."""
    lam, mu, nu = _as_tuple(lam), _as_tuple(mu), _as_tuple(nu)
    k = sum(lam)
    if sum(mu) != k or sum(nu) != k:
        raise ValueError("weight mismatch")
    fk = math.factorial(k)
    total = 0
    for rho in partitions(k):
        total += (fk // z_order(rho)) * char_value(lam, rho) * char_value(mu, rho) * char_value(nu, rho)
    q, r = divmod(total, fk)
    if r:
        raise ArithmeticError("non-integral Kronecker coefficient")
    return q


def character_table(k: int) -> tuple[tuple[tuple[int, ...], ...], list[list[int]]]:
    """Rows indexed by characters mu, columns by classes rho, both in ``partitions(k)`` order."""
    ps = partitions(k)
    return ps, [[char_value(mu, rho) for rho in ps] for mu in ps]


# ---------------------------------------------------------------------------
# column generator


class _RimHookMaps:
    """Sparse matrices for multiplication by p_r on Schur functions of length <= N."""

    def __init__(self, N: int, max_weight: int):
        self.N = N
        self.basis = [partitions(k, N) for k in range(max_weight + 1)]
        self.index = [{p: i for i, p in enumerate(b)} for b in self.basis]
        self._cache: dict = {}

    def matrix(self, w: int, r: int):
        key = (w, r)
        M = self._cache.get(key)
        if M is None:
            rows, cols, vals = [], [], []
            tgt = self.index[w + r]
            for i, lam in enumerate(self.basis[w]):
                for mu, sgn in add_rim_hooks(lam, r, self.N):
                    rows.append(tgt[mu])
                    cols.append(i)
                    vals.append(sgn)
            M = sparse.csr_matrix((vals, (rows, cols)),
                                  shape=(len(self.basis[w + r]), len(self.basis[w])),
                                  dtype=np.int64)
            self._cache[key] = M
        return M


def character_columns(N: int, max_weight: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield ``(rho, column)`` for every cycle type of weight <= max_weight,
    where ``column[i] = chi^{mu_i}(rho)`` over partitions mu_i with at most N
    parts (indexed as in ``partitions(|rho|, N)``)."""
    maps = _RimHookMaps(N, max_weight)
    start = np.ones(1, dtype=np.int64)
    stack = [((), start)]
    while stack:
        rho, vec = stack.pop()
        yield rho, vec
        w = sum(rho)
        top = rho[-1] if rho else max_weight
        for r in range(min(top, max_weight - w), 0, -1):
            stack.append((rho + (r,), maps.matrix(w, r) @ vec))


# ---------------------------------------------------------------------------
# Formanek engine


@dataclass(frozen=True)
class SchurExpansion:
    """Degree-k component as ``sum c[(p, q)] f_{p,q}``."""

    k: int
    coeffs: dict

    def ordered(self) -> list[tuple[tuple[int, int], int]]:
        """Terms with decreasing p - q (the usual display order)."""
        return sorted(((pq, c) for pq, c in self.coeffs.items() if c),
                      key=lambda kv: -(kv[0][0] - kv[0][1]))

    def bigraded(self) -> dict[tuple[int, int], int]:
        out: dict = defaultdict(int)
        for (p, q), c in self.coeffs.items():
            for i in range(p - q + 1):
                out[(q + i, p - i)] += c
        return dict(out)

    def dimension(self) -> int:
        return sum(c * (p - q + 1) for (p, q), c in self.coeffs.items())


def _theta_by_class(n: int, D: int) -> tuple[dict, dict]:
    """theta_n(rho) = sum_{l(mu)<=n} chi^mu(rho)**2 and the two-row character
    columns, for every rho of weight <= D."""
    N = max(n, 2)
    two_row: dict = {}
    theta: dict = {}
    # positions of partitions with at most n resp. 2 parts inside the length-N basis
    sel_n = [[i for i, p in enumerate(partitions(k, N)) if len(p) <= n] for k in range(D + 1)]
    sel_2 = [[(p, i) for i, p in enumerate(partitions(k, N)) if len(p) <= 2] for k in range(D + 1)]
    for rho, col in character_columns(N, D):
        k = sum(rho)
        vals = col.tolist()
        theta[rho] = sum(vals[i] * vals[i] for i in sel_n[k])
        two_row[rho] = {(p + (0, 0))[:2]: vals[i] for p, i in sel_2[k]}
    return theta, two_row


def _expansions(theta_at, classes_by_weight, two_row, D) -> list[SchurExpansion]:
    out = []
    for k in range(D + 1):
        fk = math.factorial(k)
        acc: dict = defaultdict(int)
        for rho in classes_by_weight[k]:
            th = theta_at(rho)
            if not th:
                continue
            w = (fk // z_order(rho)) * th
            for pq, chi in two_row[rho].items():
                acc[pq] += w * chi
        coeffs = {}
        for pq, v in acc.items():
            q, r = divmod(v, fk)
            if r:
                raise ArithmeticError(f"non-integral multiplicity at degree {k}, {pq}")
            if q:
                coeffs[pq] = q
        out.append(SchurExpansion(k, coeffs))
    return out


def _by_weight(classes) -> list[list[tuple[int, ...]]]:
    out: dict = defaultdict(list)
    for rho in classes:
        out[sum(rho)].append(rho)
    return out


def _series(exps: list[SchurExpansion], D: int) -> TruncSeries:
    coeffs: dict = {}
    for e in exps:
        coeffs.update(e.bigraded())
    return TruncSeries(D, coeffs, ("s", "t"))


def formanek_pure(n: int, D: int) -> tuple[list[SchurExpansion], TruncSeries]:
    """Schur expansions of the degree 0..D components of C_{n,2} and the
    resulting bigraded series."""
    if n < 0 or D < 0:
        raise ValueError("n and D must be nonnegative")
    if n == 0:
        exps = [SchurExpansion(0, {(0, 0): 1})] + [SchurExpansion(k, {}) for k in range(1, D + 1)]
        return exps, _series(exps, D)
    theta, two_row = _theta_by_class(n, D)
    exps = _expansions(theta.__getitem__, _by_weight(theta), two_row, D)
    return exps, _series(exps, D)


def formanek_mixed(n: int, D: int) -> tuple[list[SchurExpansion], TruncSeries]:
    """Same for T_{n,2}: the degree-k part is theta_n^{(k+1)} restricted to S_k,
    whose value at rho is theta_n^{(k+1)} at rho with a fixed point added."""
    if n < 0 or D < 0:
        raise ValueError("n and D must be nonnegative")
    if n == 0:
        exps = [SchurExpansion(0, {(0, 0): 1})] + [SchurExpansion(k, {}) for k in range(1, D + 1)]
        return exps, _series(exps, D)
    theta, _ = _theta_by_class(n, D + 1)
    _, two_row = _theta_by_class(2, D)
    classes = [rho for rho in theta if sum(rho) <= D]
    exps = _expansions(lambda rho: theta[rho + (1,)], _by_weight(classes), two_row, D)
    return exps, _series(exps, D)


def single_graded(series: TruncSeries) -> list[int]:
    return series.diagonal().to_list()


# ---------------------------------------------------------------------------
# limits and differences


def limit_products(D: int) -> tuple[list[int], list[int]]:
    """Expansions of prod_{k>=1} 1/(1-2t^k) and 1/(1-2t)**2 prod_{k>=2} 1/(1-2t^k)."""
    def prod_from(k0: int, extra: list[int]) -> list[int]:
        a = list(extra)
        for k in range(k0, D + 1):
            # divide by (1 - 2 t^k)
            for i in range(k, D + 1):
                a[i] += 2 * a[i - k]
        return a

    unit = [1] + [0] * D
    pure = prod_from(1, unit)
    sq = [(i + 1) * 2 ** i for i in range(D + 1)]  # 1/(1-2t)^2
    mixed = prod_from(2, sq)
    return pure, mixed


def second_differences(table: dict[int, list[int]], count: int, first: int = 0,
                       offset: int = 0, floor: int = 2) -> list[int]:
    """alpha_k = c_n(n+k) - c_{n-1}(n+k) - c_{n-1}(n+k-1) + c_{n-2}(n+k-1) for k = first, first+1, ...

    with n = max(k + offset, floor). ``table[n]`` is the coefficient list of row n.
    """
    out = []
    for k in range(first, first + count):
        n = max(k + offset, floor)
        c = table
        out.append(c[n][n + k] - c[n - 1][n + k] - c[n - 1][n + k - 1] + c[n - 2][n + k - 1])
    return out


def coefficient_table(rows: int, D: int, mixed: bool = False) -> dict[int, list[int]]:
    """Single-graded coefficients for n = 0..rows-1 up to degree D."""
    f = formanek_mixed if mixed else formanek_pure
    return {n: single_graded(f(n, D)[1]) for n in range(rows)}


def dimension(mu) -> int:
    mu = _as_tuple(mu)
    return char_value(mu, (1,) * sum(mu))
