"""Exact sparse Laurent polynomials, binomial-denominator rational functions
and truncated power series.

Monomials are exponent tuples indexed by a fixed variable list; a polynomial
is a mapping ``monomial -> int`` with no zero coefficients stored.  A
rational function keeps its denominator factored as a multiset of binomials
``(1 - u)**m``, which is the only shape of denominator that occurs for
Molien-type series and makes cancellation a matter of trial division.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from functools import reduce as _fold
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]

DEFAULT_PRIME = 4611686018427387847  # largest prime below 2**62


# ---------------------------------------------------------------------------
# raw dict helpers (used directly by the residue engine for speed)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_inv(a: Monomial) -> Monomial:
    return tuple(-x for x in a)


def mono_pow(a: Monomial, k: int) -> Monomial:
    return tuple(k * x for x in a)


def mono_degree(a: Monomial) -> int:
    return sum(a)


def add_into(acc: dict, p: Mapping[Monomial, int], scale: int = 1) -> dict:
    """In-place ``acc += scale * p``; returns ``acc``."""
    for m, c in p.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def poly_mul_raw(p: Mapping[Monomial, int], q: Mapping[Monomial, int]) -> dict:
    if len(p) < len(q):
        p, q = q, p
    out: dict = defaultdict(int)
    for m2, c2 in q.items():
        for m1, c1 in p.items():
            out[tuple(x + y for x, y in zip(m1, m2))] += c1 * c2
    return {m: c for m, c in out.items() if c}


def shift_raw(p: Mapping[Monomial, int], m: Monomial, scale: int = 1) -> dict:
    return {mono_mul(k, m): scale * c for k, c in p.items()}


def mul_binomial_raw(p: Mapping[Monomial, int], u: Monomial, power: int = 1) -> dict:
    """Return ``p * (1 - u)**power``."""
    out = dict(p)
    for _ in range(power):
        nxt = dict(out)
        for m, c in out.items():
            k = mono_mul(m, u)
            v = nxt.get(k, 0) - c
            if v:
                nxt[k] = v
            else:
                nxt.pop(k, None)
        out = nxt
    return out


def div_binomial_raw(p: Mapping[Monomial, int], u: Monomial) -> dict | None:
    """Exact quotient ``p / (1 - u)`` or ``None`` if ``(1 - u)`` does not divide ``p``.

    Monomials of ``p`` are grouped into chains ``b, b*u, b*u**2, ...``; the
    quotient along a chain is the running sum of the coefficients and the
    division is exact iff every chain sums to zero.
    """
    if not any(u):
        raise ZeroDivisionError("division by 1 - 1")
    if not p:
        return {}
    i = next(k for k, e in enumerate(u) if e)
    if u[i] < 0:
        # 1/(1-u) = -u^{-1} / (1-u^{-1})
        q = div_binomial_raw(p, mono_inv(u))
        if q is None:
            return None
        return shift_raw(q, mono_inv(u), -1)
    step = u[i]
    chains: dict = defaultdict(list)
    for m, c in p.items():
        k = m[i] // step
        base = tuple(a - k * b for a, b in zip(m, u))
        chains[base].append((k, c))
    out = {}
    for base, items in chains.items():
        items.sort()
        total = 0
        prev_k = None
        for k, c in items:
            if prev_k is not None and total:
                for kk in range(prev_k, k):
                    out[tuple(a + kk * b for a, b in zip(base, u))] = total
            total += c
            prev_k = k
        if total:
            return None
    return out


def substitute_raw(p: Mapping[Monomial, int], images: Sequence[Monomial]) -> dict:
    """Monomial substitution: variable ``i`` is replaced by monomial ``images[i]``."""
    out: dict = defaultdict(int)
    width = len(images[0]) if images else 0
    for m, c in p.items():
        e = [0] * width
        for k, ek in enumerate(m):
            if ek:
                img = images[k]
                for j in range(width):
                    e[j] += ek * img[j]
        out[tuple(e)] += c
    return {m: c for m, c in out.items() if c}


def eval_mod(p: Mapping[Monomial, int], point: Sequence[int], prime: int) -> int:
    acc = 0
    for m, c in p.items():
        v = c % prime
        for x, e in zip(point, m):
            if e > 0:
                v = v * pow(x, e, prime) % prime
            elif e < 0:
                v = v * pow(pow(x, -e, prime), prime - 2, prime) % prime
        acc += v
    return acc % prime


def _sort_key(m: Monomial) -> tuple:
    return (sum(m), m)


# ---------------------------------------------------------------------------
# SparsePoly


@dataclass(frozen=True, eq=False)
class SparsePoly:
    """Sparse Laurent polynomial with integer coefficients."""

    terms: Mapping[Monomial, int]
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        clean = {tuple(m): int(c) for m, c in self.terms.items() if c}
        for m in clean:
            if len(m) != len(self.names):
                raise ValueError(f"monomial {m} does not match variables {self.names}")
        object.__setattr__(self, "terms", clean)

    # construction ----------------------------------------------------------
    @classmethod
    def zero(cls, names: Sequence[str]) -> "SparsePoly":
        return cls({}, tuple(names))

    @classmethod
    def const(cls, c: int, names: Sequence[str]) -> "SparsePoly":
        return cls({(0,) * len(names): c}, tuple(names))

    @classmethod
    def monomial(cls, m: Monomial, names: Sequence[str], c: int = 1) -> "SparsePoly":
        return cls({tuple(m): c}, tuple(names))

    @classmethod
    def var(cls, name: str, names: Sequence[str]) -> "SparsePoly":
        names = tuple(names)
        m = [0] * len(names)
        m[names.index(name)] = 1
        return cls({tuple(m): 1}, names)

    @classmethod
    def from_univariate(cls, coeffs: Sequence[int], name: str = "t") -> "SparsePoly":
        return cls({(k,): c for k, c in enumerate(coeffs) if c}, (name,))

    # basic queries ---------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0])))

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def min_exponents(self) -> Monomial:
        return tuple(min(m[i] for m in self.terms) for i in range(self.nvars))

    def max_exponents(self) -> Monomial:
        return tuple(max(m[i] for m in self.terms) for i in range(self.nvars))

    def is_polynomial(self) -> bool:
        return all(e >= 0 for m in self.terms for e in m)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "SparsePoly") -> None:
        if self.names != other.names:
            raise ValueError(f"variable mismatch: {self.names} vs {other.names}")

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return SparsePoly.const(other, self.names)
        return NotImplemented

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return SparsePoly(add_into(dict(self.terms), other.terms), self.names)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly({m: -c for m, c in self.terms.items()}, self.names)

    def __sub__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return SparsePoly(add_into(dict(self.terms), other.terms, -1), self.names)

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def __mul__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return SparsePoly(poly_mul_raw(self.terms, other.terms), self.names)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise ValueError("negative power")
        out = SparsePoly.const(1, self.names)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePoly.const(other, self.names)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.names, frozenset(self.terms.items())))

    def shift(self, m: Monomial, scale: int = 1) -> "SparsePoly":
        return SparsePoly(shift_raw(self.terms, m, scale), self.names)

    def mul_binomial(self, u: Monomial, power: int = 1) -> "SparsePoly":
        return SparsePoly(mul_binomial_raw(self.terms, u, power), self.names)

    def div_binomial(self, u: Monomial) -> "SparsePoly | None":
        q = div_binomial_raw(self.terms, tuple(u))
        return None if q is None else SparsePoly(q, self.names)

    def substitute(self, images: Mapping[str, Monomial] | Sequence[Monomial],
                   names: Sequence[str] | None = None) -> "SparsePoly":
        """Monomial substitution into a (possibly new) variable list."""
        names = tuple(names) if names is not None else self.names
        if isinstance(images, Mapping):
            imgs = []
            for i, v in enumerate(self.names):
                if v in images:
                    imgs.append(tuple(images[v]))
                else:
                    unit = [0] * len(names)
                    unit[names.index(v)] = 1
                    imgs.append(tuple(unit))
        else:
            imgs = [tuple(x) for x in images]
        return SparsePoly(substitute_raw(self.terms, imgs), names)

    def swap(self, i: int = 0, j: int = 1) -> "SparsePoly":
        def sw(m):
            m = list(m)
            m[i], m[j] = m[j], m[i]
            return tuple(m)
        return SparsePoly({sw(m): c for m, c in self.terms.items()}, self.names)

    def reflect(self, d: Monomial) -> "SparsePoly":
        """``x**d * p(1/x)`` componentwise."""
        return SparsePoly({tuple(a - b for a, b in zip(d, m)): c for m, c in self.terms.items()},
                          self.names)

    def evaluate(self, point: Sequence[int]) -> int:
        acc = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e < 0:
                    raise ValueError("Laurent term cannot be evaluated over the integers")
                v *= x ** e
            acc += v
        return acc

    def evaluate_mod(self, point: Sequence[int], prime: int = DEFAULT_PRIME) -> int:
        return eval_mod(self.terms, point, prime)

    def diagonal(self, name: str = "t") -> "SparsePoly":
        """Set every variable equal to a single variable ``name``."""
        out: dict = defaultdict(int)
        for m, c in self.terms.items():
            out[(sum(m),)] += c
        return SparsePoly(out, (name,))

    def univariate_coeffs(self) -> list[int]:
        if self.nvars != 1:
            raise ValueError("not univariate")
        if not self.terms:
            return []
        if not self.is_polynomial():
            raise ValueError("Laurent polynomial has no coefficient list")
        top = max(m[0] for m in self.terms)
        return [self.terms.get((k,), 0) for k in range(top + 1)]

    # printing --------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(self.names, m) if e
            )
            if not mono:
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{mono}")
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c:+d}*{mono}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s

    __repr__ = __str__


def poly_arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def binomial_poly(u: Monomial, names: Sequence[str], power: int = 1) -> SparsePoly:
    return SparsePoly.const(1, names).mul_binomial(u, power)


def primitive_root(u: Monomial) -> tuple[Monomial, int]:
    """Write ``u = w**g`` with ``w`` primitive; returns ``(w, g)``."""
    g = _fold(gcd, (abs(e) for e in u), 0)
    if g == 0:
        return u, 0
    return tuple(e // g for e in u), g


# ---------------------------------------------------------------------------
# RatFn


@dataclass(frozen=True, eq=False)
class RatFn:
    """``numerator / prod (1 - u)**m`` with a factored binomial denominator."""

    numerator: SparsePoly
    denominator: tuple[tuple[Monomial, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict = defaultdict(int)
        for u, m in self.denominator:
            u = tuple(u)
            if len(u) != self.numerator.nvars:
                raise ValueError("denominator monomial has wrong width")
            if not any(u):
                raise ZeroDivisionError("denominator factor 1 - 1")
            if m < 0:
                raise ValueError("negative multiplicity")
            if m:
                merged[u] += m
        object.__setattr__(
            self, "denominator",
            tuple(sorted(merged.items(), key=lambda kv: _sort_key(kv[0]))),
        )

    @property
    def names(self) -> tuple[str, ...]:
        return self.numerator.names

    @classmethod
    def from_poly(cls, p: SparsePoly) -> "RatFn":
        return cls(p, ())

    def den_dict(self) -> dict[Monomial, int]:
        return dict(self.denominator)

    def denominator_poly(self) -> SparsePoly:
        out = dict(SparsePoly.const(1, self.names).terms)
        for u, m in self.denominator:
            out = mul_binomial_raw(out, u, m)
        return SparsePoly(out, self.names)

    def is_normalized(self) -> bool:
        """Numerator constant term 1 and every ``u`` of positive total degree."""
        return (self.numerator.constant_term() == 1 and self.numerator.is_polynomial()
                and all(sum(u) > 0 and min(u) >= 0 for u, _ in self.denominator))

    def __mul__(self, other: "RatFn") -> "RatFn":
        return RatFn(self.numerator * other.numerator, self.denominator + other.denominator)

    def __add__(self, other: "RatFn") -> "RatFn":
        a, b = self.den_dict(), other.den_dict()
        lcm = {u: max(a.get(u, 0), b.get(u, 0)) for u in set(a) | set(b)}
        na = dict(self.numerator.terms)
        nb = dict(other.numerator.terms)
        for u, m in lcm.items():
            na = mul_binomial_raw(na, u, m - a.get(u, 0))
            nb = mul_binomial_raw(nb, u, m - b.get(u, 0))
        return RatFn(SparsePoly(add_into(na, nb), self.names), tuple(lcm.items()))

    def equals(self, other: "RatFn") -> bool:
        """Value equality by cross multiplication."""
        return (self.numerator * other.denominator_poly()
                == other.numerator * self.denominator_poly())

    def substitute(self, images: Mapping[str, Monomial], names: Sequence[str]) -> "RatFn":
        num = self.numerator.substitute(images, names)
        den = []
        probe_names = self.names
        for u, m in self.denominator:
            img = SparsePoly.monomial(u, probe_names).substitute(images, names)
            (w,) = img.terms
            den.append((w, m))
        return RatFn(num, tuple(den))

    def diagonal(self, name: str = "t") -> "RatFn":
        """Specialize every variable to the single variable ``name``."""
        return RatFn(self.numerator.diagonal(name),
                     tuple(((sum(u),), m) for u, m in self.denominator))

    def normalized(self) -> "RatFn":
        """Flip every factor to ``u`` of positive degree and scale the numerator
        so that its lowest term is the constant 1 (up to sign of the value)."""
        num = dict(self.numerator.terms)
        den = []
        for u, m in self.denominator:
            if sum(u) < 0 or (sum(u) == 0 and u < tuple(0 for _ in u)):
                # (1-u) = -u (1 - 1/u)
                num = shift_raw(num, mono_pow(mono_inv(u), m), (-1) ** m)
                u = mono_inv(u)
            den.append((u, m))
        p = SparsePoly(num, self.names)
        if p.terms:
            low = p.min_exponents()
            if any(low):
                p = p.shift(mono_inv(low))
        return RatFn(p, tuple(den))

    def __str__(self) -> str:
        facs = []
        for u, m in self.denominator:
            mono = SparsePoly.monomial(u, self.names)
            facs.append(f"(1 - {mono})" + (f"^{m}" if m > 1 else ""))
        return f"({self.numerator}) / [{' '.join(facs) or '1'}]"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# TruncSeries


@dataclass(frozen=True, eq=False)
class TruncSeries:
    """Power series known up to a total degree bound; coefficients beyond it are undefined."""

    max_degree: int
    coeffs: Mapping[Monomial, int] = field(default_factory=dict)
    names: tuple[str, ...] = ("t",)

    def __post_init__(self) -> None:
        clean = {}
        for m, c in self.coeffs.items():
            m = tuple(m)
            if min(m, default=0) < 0:
                raise ValueError("negative exponent in power series")
            if sum(m) <= self.max_degree and c:
                clean[m] = int(c)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_list(cls, values: Sequence[int], name: str = "t") -> "TruncSeries":
        return cls(len(values) - 1, {(k,): v for k, v in enumerate(values)}, (name,))

    def coeff(self, *m: int) -> int:
        if len(m) == 1 and isinstance(m[0], tuple):
            m = m[0]
        if sum(m) > self.max_degree:
            raise IndexError(f"degree {sum(m)} beyond truncation {self.max_degree}")
        return self.coeffs.get(tuple(m), 0)

    def truncate(self, d: int) -> "TruncSeries":
        if d > self.max_degree:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(d, self.coeffs, self.names)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        d = min(self.max_degree, other.max_degree)
        return TruncSeries(d, add_into(dict(self.coeffs), other.coeffs), self.names)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        d = min(self.max_degree, other.max_degree)
        return TruncSeries(d, add_into(dict(self.coeffs), other.coeffs, -1), self.names)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        d = min(self.max_degree, other.max_degree)
        out: dict = defaultdict(int)
        for m1, c1 in self.coeffs.items():
            r = d - sum(m1)
            if r < 0:
                continue
            for m2, c2 in other.coeffs.items():
                if sum(m2) <= r:
                    out[mono_mul(m1, m2)] += c1 * c2
        return TruncSeries(d, out, self.names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        d = min(self.max_degree, other.max_degree)
        return self.truncate(d).coeffs == other.truncate(d).coeffs

    def diagonal(self, name: str = "t") -> "TruncSeries":
        out: dict = defaultdict(int)
        for m, c in self.coeffs.items():
            out[(sum(m),)] += c
        return TruncSeries(self.max_degree, out, (name,))

    def to_list(self) -> list[int]:
        if len(self.names) != 1:
            return self.diagonal().to_list()
        return [self.coeffs.get((k,), 0) for k in range(self.max_degree + 1)]

    def to_json(self) -> str:
        rows = [list(m) + [c] for m, c in sorted(self.coeffs.items(), key=lambda kv: _sort_key(kv[0]))]
        return json.dumps({"variables": list(self.names), "max_degree": self.max_degree,
                           "coeffs": rows})

    @classmethod
    def from_json(cls, text: str) -> "TruncSeries":
        data = json.loads(text)
        coeffs = {tuple(r[:-1]): r[-1] for r in data["coeffs"]}
        return cls(data["max_degree"], coeffs, tuple(data["variables"]))


def truncated_geometric(u: Monomial, power: int, degree: int) -> dict:
    """``(1 - u)**(-power)`` up to total degree ``degree`` (u of positive degree)."""
    du = sum(u)
    out = {}
    c = 1
    k = 0
    # binom(power + k - 1, k)
    while k * du <= degree:
        out[mono_pow(u, k)] = c
        k += 1
        c = c * (power + k - 1) // k
    return out


def ratfn_expand(f: RatFn, degree: int) -> TruncSeries:
    """Maclaurin coefficients of ``f`` up to total degree ``degree``."""
    for u, _ in f.denominator:
        if sum(u) <= 0 or min(u) < 0:
            raise ValueError(f"denominator factor 1 - {u} has no expansion at the origin")
    if not f.numerator.is_polynomial():
        raise ValueError("numerator must be a polynomial")
    nv = f.numerator.nvars
    if nv == 1:
        return _expand_univariate(f, degree)
    cur = {m: c for m, c in f.numerator.terms.items() if sum(m) <= degree}
    for u, m in f.denominator:
        geo = truncated_geometric(u, m, degree)
        nxt: dict = defaultdict(int)
        for m1, c1 in cur.items():
            r = degree - sum(m1)
            for m2, c2 in geo.items():
                if sum(m2) <= r:
                    nxt[mono_mul(m1, m2)] += c1 * c2
        cur = {k: v for k, v in nxt.items() if v}
    return TruncSeries(degree, cur, f.names)


def _expand_univariate(f: RatFn, degree: int) -> TruncSeries:
    a = [0] * (degree + 1)
    for (k,), c in f.numerator.terms.items():
        if k <= degree:
            a[k] += c
    for (k,), m in f.denominator:
        for _ in range(m):
            # divide by (1 - t^k): running sums with stride k
            for i in range(k, degree + 1):
                a[i] += a[i - k]
    return TruncSeries.from_list(a, f.names[0])


def series_product(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


# ---------------------------------------------------------------------------
# reduction


def _divisors(g: int) -> list[int]:
    return [d for d in range(1, g) if g % d == 0]


def ratfn_reduce(f: RatFn, certify: bool = True, seed: int = 0) -> RatFn:
    """Cancel binomial (and cyclotomic parts of binomial) factors.

    Whole factors ``(1 - u)`` are removed while they divide the numerator;
    afterwards a factor ``(1 - w**g)`` is lowered to ``(1 - w**j)`` (j | g)
    when the numerator is divisible by the quotient polynomial.  The result is
    irreducible with respect to these factors, which is all that is claimed.
    """
    num = dict(f.numerator.terms)
    den = dict(f.denominator)
    changed = True
    while changed:
        changed = False
        for u in sorted(den, key=_sort_key):
            q = div_binomial_raw(num, u)
            if q is not None:
                num = q
                den[u] -= 1
                if not den[u]:
                    del den[u]
                changed = True
                break
        if changed:
            continue
        for u in sorted(den, key=_sort_key):
            w, g = primitive_root(u)
            for j in _divisors(g):
                wj = mono_pow(w, j)
                q = div_binomial_raw(mul_binomial_raw(num, wj), u)
                if q is not None:
                    num = q
                    den[u] -= 1
                    if not den[u]:
                        del den[u]
                    den[wj] = den.get(wj, 0) + 1
                    changed = True
                    break
            if changed:
                break
    out = RatFn(SparsePoly(num, f.names), tuple(den.items()))
    if len(f.names) == 1 and out.numerator.is_polynomial():
        out = _univariate_gcd_reduce(out)
    if certify and not _same_value(f, out, seed):
        raise ArithmeticError("reduction changed the value of the rational function")
    return out


def _univariate_gcd_reduce(f: RatFn) -> RatFn:
    """Finish a univariate reduction with a true polynomial gcd, keeping the
    result only if the reduced denominator is again a product of binomials."""
    num, den = univariate_lowest_terms(f)
    if len(den) - 1 == sum(u[0] * m for u, m in f.denominator):
        return f
    cover = binomial_cover(den)
    if cover is None:
        return f
    return RatFn(SparsePoly.from_univariate(num, f.names[0]),
                 tuple(((k,), m) for k, m in cover))


def univariate_lowest_terms(f: RatFn) -> tuple[list[int], list[int]]:
    """Coefficient lists ``(N, D)`` of f in lowest terms with ``N(0) = D(0) = 1``
    (the sign of D(0) is moved to N when the numerator vanishes at 0)."""
    import flint

    if len(f.names) != 1:
        raise ValueError("univariate rational function expected")
    num = flint.fmpz_poly(f.numerator.univariate_coeffs() or [0])
    den = flint.fmpz_poly(f.denominator_poly().univariate_coeffs())
    g = num.gcd(den)
    num = num // g
    den = den // g
    nc = [int(c) for c in num.coeffs()]
    dc = [int(c) for c in den.coeffs()]
    if dc[0] < 0:
        nc = [-c for c in nc]
        dc = [-c for c in dc]
    return nc, dc


def binomial_cover(den: Sequence[int]) -> list[tuple[int, int]] | None:
    """Write a product of cyclotomic polynomials as ``prod (1 - t**k)**m``.

    Largest cyclotomic index first; ``None`` if no such product exists along
    this greedy path (or ``den`` has a non-cyclotomic factor).
    """
    import flint

    p = flint.fmpz_poly(list(den))
    mult: dict[int, int] = {}
    d = 1
    bound = 2 * p.degree() ** 2 + 2  # phi(d) >= sqrt(d/2)
    while p.degree() > 0:
        if d > bound:
            return None
        phi = flint.fmpz_poly.cyclotomic(d)
        while phi.degree() <= p.degree():
            q, r = divmod(p, phi)
            if r != 0:
                break
            p = q
            mult[d] = mult.get(d, 0) + 1
        d += 1
    if abs(int(p.coeffs()[0])) != 1:
        return None
    cover: dict[int, int] = {}
    for d in sorted(mult, reverse=True):
        while mult.get(d, 0) > 0:
            divs = [e for e in range(1, d + 1) if d % e == 0]
            if any(mult.get(e, 0) <= 0 for e in divs):
                return None
            for e in divs:
                mult[e] -= 1
            cover[d] = cover.get(d, 0) + 1
    if any(mult.values()):
        return None
    return sorted(cover.items())


def _same_value(a: RatFn, b: RatFn, seed: int = 0, trials: int = 3,
                prime: int = DEFAULT_PRIME) -> bool:
    """Probabilistic test ``a == b`` by evaluation at random points mod a prime."""
    rng = random.Random(seed)
    nv = len(a.names)
    for _ in range(trials):
        pt = [rng.randrange(2, prime - 1) for _ in range(nv)]
        da = _den_mod(a, pt, prime)
        db = _den_mod(b, pt, prime)
        if da == 0 or db == 0:
            continue
        lhs = a.numerator.evaluate_mod(pt, prime) * db % prime
        rhs = b.numerator.evaluate_mod(pt, prime) * da % prime
        if lhs != rhs:
            return False
    return True


def _den_mod(f: RatFn, pt: Sequence[int], prime: int) -> int:
    acc = 1
    for u, m in f.denominator:
        v = (1 - eval_mod({u: 1}, pt, prime)) % prime
        acc = acc * pow(v, m, prime) % prime
    return acc


def functional_equation_check(n: SparsePoly, d: int) -> bool:
    """``(st)**d N(1/s, 1/t) == N(s, t)`` and ``N(s, t) == N(t, s)``.

    For a univariate polynomial only palindromy ``t**d N(1/t) == N(t)`` is checked.
    """
    if n.nvars == 1:
        return n.reflect((d,)) == n
    if n.nvars != 2:
        raise ValueError("expects a polynomial in one or two variables")
    return n.reflect((d, d)) == n and n.swap() == n


# ---------------------------------------------------------------------------
# text serialization


def dumps_poly(p: SparsePoly, header: Mapping[str, str] | None = None) -> str:
    lines = [f"# vars {' '.join(p.names)}"]
    for k, v in (header or {}).items():
        lines.append(f"# {k} {v}")
    for m, c in p:
        lines.append(f"{c}  {' '.join(str(e) for e in m)}")
    return "\n".join(lines) + "\n"


def dumps_ratfn(f: RatFn, header: Mapping[str, str] | None = None) -> str:
    body = dumps_poly(f.numerator, header)
    extra = [f"DEN {' '.join(str(e) for e in u)}  {m}" for u, m in f.denominator]
    return body + ("\n".join(extra) + "\n" if extra else "")


def loads(text: str) -> tuple[RatFn, dict[str, str]]:
    """Parse the text format; returns the value (as a RatFn) and header fields."""
    names: tuple[str, ...] | None = None
    header: dict[str, str] = {}
    terms: dict = {}
    den: list = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition(" ")
            if key == "vars":
                names = tuple(val.split())
            else:
                header[key] = val.strip()
            continue
        if names is None:
            raise ValueError("missing '# vars' header")
        parts = line.split()
        if parts[0] == "DEN":
            u = tuple(int(x) for x in parts[1:-1])
            den.append((u, int(parts[-1])))
            continue
        c = int(parts[0])
        m = tuple(int(x) for x in parts[1:])
        if len(m) != len(names):
            raise ValueError(f"bad term line {raw!r}")
        terms[m] = terms.get(m, 0) + c
    if names is None:
        raise ValueError("empty document")
    return RatFn(SparsePoly(terms, names), tuple(den)), header


def loads_poly(text: str) -> SparsePoly:
    f, _ = loads(text)
    if f.denominator:
        raise ValueError("document has a denominator")
    return f.numerator


def product_of_binomials(factors: Iterable[tuple[Monomial, int]], names: Sequence[str]) -> SparsePoly:
    out = dict(SparsePoly.const(1, names).terms)
    for u, m in factors:
        out = mul_binomial_raw(out, tuple(u), m)
    return SparsePoly(out, tuple(names))
