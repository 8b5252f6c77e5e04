"""Exact Molien-Weyl integration by iterated residues.

An integrand is kept as a list of terms ``coef * prod (1-v)**b / prod (1-u)**a``
where ``coef`` is a Laurent polynomial and all binomials are in canonical form
(``u`` is *small* in the chosen contour ordering).  Integrating one torus
variable replaces every term by the sum of its residues at the poles inside
the contour, including the pole at the origin.

Contours are the unit circles, with the outer variables ``s, t`` of tiny
modulus.  Degenerate situations (a pole whose modulus equals the contour's
modulus, which happens for spurious factors such as ``1 - t/s`` produced by
earlier residues) are resolved by a fixed lexicographic deformation of all
radii.  Because the original integrand has no pole near the unit torus, the
deformed iterated integral equals the original one.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Sequence

from .polyrat import (
    Monomial,
    RatFn,
    SparsePoly,
    add_into,
    div_binomial_raw,
    mono_inv,
    mono_mul,
    mono_pow,
    mul_binomial_raw,
    poly_mul_raw,
    primitive_root,
    ratfn_reduce,
)

VARIANTS_BIGRADED = ("pure", "mixed")


class PoleOnContourError(ValueError):
    """A pole sits exactly on an integration contour."""


def _gbinom(m: int, i: int) -> int:
    """Generalized binomial coefficient ``m choose i`` for any integer ``m``."""
    if i < 0:
        return 0
    num = 1
    for r in range(i):
        num *= m - r
    return num // math.factorial(i)


def _subst(m: Monomial, j: int, p: Monomial) -> Monomial:
    e = m[j]
    if not e:
        return m
    return tuple((0 if k == j else a) + e * b for k, (a, b) in enumerate(zip(m, p)))


class Ordering:
    """Lexicographic ordering of monomials by a list of weight vectors.

    ``u`` is *small* (inside every contour it is compared with) iff its first
    nonzero weight is positive.  The weight matrix must be invertible so that
    only the unit monomial is neither small nor large.
    """

    def __init__(self, weights: Sequence[Sequence[int]]):
        self.weights = [tuple(w) for w in weights]
        self._cache: dict = {}

    def sign(self, u: Monomial) -> int:
        s = self._cache.get(u)
        if s is None:
            s = 0
            for w in self.weights:
                v = 0
                for a, b in zip(w, u):
                    if b:
                        v += a * b
                if v:
                    s = 1 if v > 0 else -1
                    break
            self._cache[u] = s
        return s

    @classmethod
    def default(cls, names: Sequence[str], small: Sequence[str]) -> "Ordering":
        """Total degree in the small variables first, then each small variable
        except the first, then the remaining variables one by one."""
        names = list(names)
        nv = len(names)
        idx = [names.index(v) for v in small]
        rows = []
        if idx:
            rows.append(tuple(1 if k in idx else 0 for k in range(nv)))
            for i in idx[1:]:
                rows.append(tuple(1 if k == i else 0 for k in range(nv)))
        for k in range(nv):
            if k not in idx:
                rows.append(tuple(1 if q == k else 0 for q in range(nv)))
        return cls(rows)


class _Term:
    __slots__ = ("coef", "num", "den")

    def __init__(self, coef: dict, num: dict, den: dict):
        self.coef = coef
        self.num = num
        self.den = den


def _make_term(coef: dict, num: Iterable, den: Iterable, order: Ordering,
               zero: Monomial) -> _Term | None:
    """Canonicalize binomials (flip large ones) and cancel num against den."""
    shift = None
    sgn = 1
    nn: dict = defaultdict(int)
    dd: dict = defaultdict(int)
    for u, b in num:
        if not b:
            continue
        s = order.sign(u)
        if s == 0:
            return None
        if s < 0:
            # 1 - u = -u (1 - 1/u)
            if b & 1:
                sgn = -sgn
            sh = mono_pow(u, b)
            shift = sh if shift is None else mono_mul(shift, sh)
            u = mono_inv(u)
        nn[u] += b
    for u, a in den:
        if not a:
            continue
        s = order.sign(u)
        if s == 0:
            raise PoleOnContourError(f"denominator factor 1 - {u} vanishes identically")
        if s < 0:
            if a & 1:
                sgn = -sgn
            sh = mono_pow(u, -a)
            shift = sh if shift is None else mono_mul(shift, sh)
            u = mono_inv(u)
        dd[u] += a
    for u in list(nn):
        if u in dd:
            k = min(nn[u], dd[u])
            nn[u] -= k
            dd[u] -= k
            if not nn[u]:
                del nn[u]
            if not dd[u]:
                del dd[u]
    if shift is not None or sgn != 1:
        if shift is None:
            shift = zero
        coef = {mono_mul(m, shift): sgn * c for m, c in coef.items()}
    return _Term(coef, dict(nn), dict(dd))


def _merge(terms: Iterable[_Term]) -> list[_Term]:
    groups: dict = {}
    for T in terms:
        if T is None or not T.coef:
            continue
        k = (frozenset(T.num.items()), frozenset(T.den.items()))
        g = groups.get(k)
        if g is None:
            groups[k] = _Term(dict(T.coef), T.num, T.den)
        else:
            add_into(g.coef, T.coef)
    return [T for T in groups.values() if T.coef]


def _binomial_power_poly(u: Monomial, b: int, zero: Monomial) -> dict:
    return mul_binomial_raw({zero: 1}, u, b)


def _expand_num_factors(coef: dict, num: dict, pred) -> tuple[dict, dict]:
    """Multiply the num factors selected by ``pred`` into ``coef``."""
    keep = {}
    for u, b in num.items():
        if pred(u):
            coef = mul_binomial_raw(coef, u, b)
        else:
            keep[u] = b
    return coef, keep


def _lcm_reduce(T: _Term, j: int, L: int, zero: Monomial) -> _Term:
    """Rewrite ``T`` so every ``x_j``-dependent denominator is ``1 - c x_j**(+-L)``,
    keep only the part of the numerator whose ``x_j`` exponent is a multiple of L
    (the rest has no constant term) and rename ``x_j**L`` to ``x_j``."""
    coef = T.coef
    den: dict = defaultdict(int)
    for u, a in T.den.items():
        e = abs(u[j])
        if e and e != L:
            r = L // e
            geo = {}
            for i in range(r):
                geo[mono_pow(u, i)] = 1
            for _ in range(a):
                coef = poly_mul_raw(coef, geo)
            den[mono_pow(u, r)] += a
        else:
            den[u] += a
    coef, num = _expand_num_factors(coef, T.num, lambda u: u[j] != 0)

    def squash(m):
        return m[:j] + (m[j] // L,) + m[j + 1:]

    coef = {squash(m): c for m, c in coef.items() if m[j] % L == 0}
    den2 = {squash(u): a for u, a in den.items()}
    return _Term(coef, num, den2)


class ResidueEngine:
    """Iterated residue integration over a fixed list of variables."""

    def __init__(self, names: Sequence[str], order: Ordering):
        self.names = tuple(names)
        self.order = order
        self.zero = (0,) * len(self.names)

    def term(self, coef: dict, num: dict, den: dict) -> _Term | None:
        return _make_term(coef, num.items(), den.items(), self.order, self.zero)

    # one variable --------------------------------------------------------
    def integrate(self, terms: list[_Term], j: int) -> list[_Term]:
        out: list[_Term] = []
        for T in terms:
            out.extend(self._integrate_term(T, j))
        return _merge(out)

    def _integrate_term(self, T: _Term, j: int) -> list[_Term]:
        L = 1
        for u in T.den:
            if u[j]:
                L = math.lcm(L, abs(u[j]))
        if L > 1:
            T = _lcm_reduce(T, j, L, self.zero)
            T = self.term(T.coef, T.num, T.den)
            if T is None or not T.coef:
                return []
        # numerator factors with |e| > 1 have no clean residue form
        if any(abs(u[j]) > 1 for u in T.num):
            coef, num = _expand_num_factors(T.coef, T.num, lambda u: abs(u[j]) > 1)
            T = _Term(coef, num, T.den)
        results = []
        poles: dict = {}
        for u in T.den:
            e = u[j]
            if not e:
                continue
            c = u[:j] + (0,) + u[j + 1:]
            p = mono_inv(c) if e == 1 else c
            q = p[:j] + (-1,) + p[j + 1:]
            s = self.order.sign(q)
            if s == 0:
                raise PoleOnContourError(f"pole {p} on the contour of variable {self.names[j]}")
            if s > 0:
                poles[p] = True
        for p in poles:
            r = self._pole_residue(T, j, p)
            if r is not None:
                results.append(r)
        r0 = self._zero_residue(T, j)
        if r0 is not None:
            results.append(r0)
        return results

    def _pole_residue(self, T: _Term, j: int, p: Monomial) -> _Term | None:
        zero = self.zero
        factors = []  # (u, power, e, w)
        m_eff = 0
        out_num: list = []
        out_den: list = []
        for u, b in T.num.items():
            if u[j]:
                w = _subst(u, j, p)
                if w == zero:
                    m_eff -= b
                factors.append((u, b, u[j], w))
            else:
                out_num.append((u, b))
        for u, a in T.den.items():
            if u[j]:
                w = _subst(u, j, p)
                if w == zero:
                    m_eff += a
                factors.append((u, -a, u[j], w))
            else:
                out_den.append((u, a))
        if m_eff <= 0:
            return None
        K = m_eff - 1
        sign = 1
        E = -1  # from dx/x
        series_list = []
        for u, power, e, w in factors:
            if w == zero:
                if e == 1:
                    if power & 1:
                        sign = -sign
                else:
                    E -= power
                continue
            if power > 0:
                out_num.append((w, power))
            else:
                out_den.append((w, -power))
            if K:
                out_den.append((w, K))
                coeffs = []
                for i in range(K + 1):
                    g = _gbinom(power, i)
                    if e == 1 and i & 1:
                        g = -g
                    poly = _binomial_power_poly(w, K - i, zero)
                    mono = mono_pow(w, i) if e == 1 else zero
                    coeffs.append({mono_mul(m, mono): g * c for m, c in poly.items()})
                series_list.append(coeffs)
                if e == -1:
                    E -= power
        # coefficient series: sum_k A_k (1+y)^(k+E)
        by_k: dict = defaultdict(dict)
        for m, c in T.coef.items():
            k = m[j]
            mm = _subst(m, j, p)
            d = by_k[k]
            v = d.get(mm, 0) + c
            if v:
                d[mm] = v
            else:
                d.pop(mm, None)
        base = []
        for i in range(K + 1):
            acc: dict = {}
            for k, A in by_k.items():
                g = _gbinom(k + E, i)
                if g:
                    add_into(acc, A, g)
            base.append(acc)
        if K == 0:
            coef = base[0]
        else:
            cur = base
            for idx, ser in enumerate(series_list):
                last = idx == len(series_list) - 1
                nxt = [dict() for _ in range(K + 1)]
                rng = [K] if last else range(K + 1)
                for d in rng:
                    acc = nxt[d]
                    for i in range(d + 1):
                        if cur[i] and ser[d - i]:
                            add_into(acc, poly_mul_raw(cur[i], ser[d - i]))
                cur = nxt
            coef = cur[K]
        if not coef:
            return None
        if sign != 1:
            coef = {m: -c for m, c in coef.items()}
        return _make_term(coef, out_num, out_den, self.order, zero)

    def _zero_residue(self, T: _Term, j: int) -> _Term | None:
        """Constant term in ``x_j`` of the Laurent expansion at the origin."""
        zero = self.zero
        coef, num = _expand_num_factors(T.coef, T.num, lambda u: u[j] != 0)
        series = []  # (step, base monomial, power)
        den = {}
        shift_x = 0
        sign = 1
        shift_m = zero
        for u, a in T.den.items():
            e = u[j]
            if not e:
                den[u] = a
                continue
            c = u[:j] + (0,) + u[j + 1:]
            if e > 0:
                series.append((e, c, a))
            else:
                f = -e
                # (1 - c x^-f)^-a = (-c)^-a x^(f a) (1 - x^f / c)^-a
                if a & 1:
                    sign = -sign
                shift_m = mono_mul(shift_m, mono_pow(c, -a))
                shift_x += f * a
                series.append((f, mono_inv(c), a))
        if not coef:
            return None
        lo = min(m[j] for m in coef) + shift_x
        if lo > 0:
            return None
        cur: dict = defaultdict(dict)
        for m, c in coef.items():
            k = m[j] + shift_x
            if k <= 0:
                mm = mono_mul(m[:j] + (0,) + m[j + 1:], shift_m)
                add_into(cur[k], {mm: sign * c})
        for step, q, a in sorted(series, key=lambda s: -s[0]):
            nxt: dict = defaultdict(dict)
            for k, poly in cur.items():
                if not poly:
                    continue
                r = 0
                binom = 1
                while k + step * r <= 0:
                    qr = mono_pow(q, r)
                    add_into(nxt[k + step * r], {mono_mul(m, qr): c for m, c in poly.items()}, binom)
                    r += 1
                    binom = binom * (a + r - 1) // r
            cur = nxt
        res = cur.get(0)
        if not res:
            return None
        return _make_term(res, num.items(), den.items(), self.order, zero)


def terms_to_ratfn(terms: list[_Term], names: Sequence[str], keep: Sequence[int]) -> RatFn:
    """Sum the terms over a common denominator (least common multiple of the
    binomial multisets), projecting monomials onto the coordinates ``keep``."""
    names = tuple(names)
    proj_names = tuple(names[k] for k in keep)

    def proj(m):
        for k, e in enumerate(m):
            if e and k not in keep:
                raise ValueError("integration variable left in result")
        return tuple(m[k] for k in keep)

    lcm: dict = {}
    for T in terms:
        for u, a in T.den.items():
            pu = proj(u)
            lcm[pu] = max(lcm.get(pu, 0), a)
    total: dict = {}
    for T in terms:
        p = {proj(m): c for m, c in T.coef.items()}
        for u, b in T.num.items():
            p = mul_binomial_raw(p, proj(u), b)
        have = {proj(u): a for u, a in T.den.items()}
        for u, m in lcm.items():
            extra = m - have.get(u, 0)
            if extra:
                p = mul_binomial_raw(p, u, extra)
        add_into(total, p)
    return RatFn(SparsePoly(total, proj_names), tuple(lcm.items()))


def residue_extract(f: RatFn, var: str, small: Sequence[str] = ("s", "t"),
                    order: Ordering | None = None) -> RatFn:
    """Constant term in ``var`` of ``f`` on the unit circle: the sum of the
    residues of ``f/var`` inside the contour.  Returns a RatFn without ``var``."""
    names = f.names
    j = names.index(var)
    order = order or Ordering.default(names, [v for v in small if v in names])
    eng = ResidueEngine(names, order)
    T = eng.term(dict(f.numerator.terms), {}, dict(f.denominator))
    terms = eng.integrate([T] if T else [], j)
    keep = [k for k in range(len(names)) if k != j]
    return terms_to_ratfn(terms, names, keep)


# ---------------------------------------------------------------------------
# Molien-Weyl integrands


def _roots(n: int) -> list[tuple[int, int]]:
    return [(k, r) for k in range(n - 1) for r in range(k, n - 1)]


def _unit(nv: int, k: int) -> Monomial:
    m = [0] * nv
    m[k] = 1
    return tuple(m)


def bigraded_integrand(n: int, variant: str = "pure") -> tuple[tuple[str, ...], dict, dict, dict]:
    """Integrand over the torus for the bigraded series, without the
    ``1/((1-s)(1-t))**n`` prefactor.  Returns ``(names, coef, num, den)``."""
    if variant not in VARIANTS_BIGRADED:
        raise ValueError(f"unknown variant {variant!r}")
    names = ("s", "t") + tuple(f"x{i + 1}" for i in range(n - 1))
    nv = len(names)
    zero = (0,) * nv
    S, Tt = _unit(nv, 0), _unit(nv, 1)
    num: dict = {}
    den: dict = defaultdict(int)
    coef = {zero: 1}
    if variant == "mixed":
        coef = {zero: n}
    for k, r in _roots(n):
        X = tuple(1 if 2 + k <= i <= 2 + r else 0 for i in range(nv))
        num[X] = num.get(X, 0) + 1
        for g in (S, Tt):
            den[mono_mul(g, X)] += 1
            den[mono_mul(g, mono_inv(X))] += 1
        if variant == "mixed":
            coef[X] = coef.get(X, 0) + 1
            coef[mono_inv(X)] = coef.get(mono_inv(X), 0) + 1
    return names, coef, num, dict(den)


def _bigraded_ordering(names: Sequence[str]) -> Ordering:
    return Ordering.default(names, ("s", "t"))


def poincare_bigraded(n: int, variant: str = "pure", order: Sequence[int] | None = None,
                      reduce: bool = True) -> RatFn:
    """P(C_{n,2}; s, t) (pure) or P(T_{n,2}; s, t) (mixed).

    ``order`` lists the torus variables ``1..n-1`` in the order they are
    integrated; the default is ``n-1, ..., 1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    names, coef, num, den = bigraded_integrand(n, variant)
    nv = len(names)
    eng = ResidueEngine(names, _bigraded_ordering(names))
    T = eng.term(coef, num, den)
    terms = [T]
    seq = list(order) if order is not None else list(range(n - 1, 0, -1))
    if sorted(seq) != list(range(1, n)):
        raise ValueError(f"order must be a permutation of 1..{n - 1}")
    for v in seq:
        terms = eng.integrate(terms, 1 + v)
    f = terms_to_ratfn(terms, names, [0, 1])
    pref = RatFn(SparsePoly.const(1, ("s", "t")), (((1, 0), n), ((0, 1), n)))
    f = f * pref
    del nv
    return finish(f) if reduce else f


def finish(f: RatFn) -> RatFn:
    """Reduce and normalize a series to constant-term-1 numerator and
    positive-degree denominator factors."""
    f = ratfn_reduce(f).normalized()
    if len(f.names) == 1:
        f = ratfn_reduce(f)
    c = f.numerator.constant_term()
    if c == -1:
        f = RatFn(-f.numerator, f.denominator)
    return f


def sharp_integrand(n: int) -> tuple[tuple[str, ...], dict, dict, dict]:
    names = ("t", "y") + tuple(f"x{i + 1}" for i in range(n - 1))
    nv = len(names)
    zero = (0,) * nv
    T, Y = _unit(nv, 0), _unit(nv, 1)
    num: dict = {mono_pow(Y, 2): 1}
    den: dict = defaultdict(int)
    den[mono_mul(T, Y)] += n
    den[mono_mul(T, mono_inv(Y))] += n
    for k, r in _roots(n):
        X = tuple(1 if 2 + k <= i <= 2 + r else 0 for i in range(nv))
        Xi = mono_inv(X)
        num[X] = num.get(X, 0) + 1
        for a in (Y, mono_inv(Y)):
            den[mono_mul(mono_mul(T, a), X)] += 1
            den[mono_mul(mono_mul(T, a), Xi)] += 1
    return names, {zero: 1}, num, dict(den)


def poincare_sharp(n: int, reduce: bool = True) -> RatFn:
    """P(C#_{n,2}; t): invariants of GL_n x SL_2."""
    names, coef, num, den = sharp_integrand(n)
    eng = ResidueEngine(names, Ordering.default(names, ("t",)))
    terms = [eng.term(coef, num, den)]
    for v in range(n - 1, 0, -1):
        terms = eng.integrate(terms, 1 + v)
    terms = eng.integrate(terms, 1)
    f = terms_to_ratfn(terms, names, [0])
    return finish(f) if reduce else f


def poincare_bullet(n: int, bigraded: RatFn | None = None, reduce: bool = True) -> RatFn:
    """P(C•_{n,2}; t): constant term in z of P(C_{n,2}; t/z, t z)."""
    if bigraded is None:
        bigraded = poincare_bigraded(n, "pure")
    names = ("t", "z")
    images = {"s": (1, -1), "t": (1, 1)}
    g = bigraded.substitute(images, names)
    f = residue_extract(g, "z", small=("t",))
    return finish(f) if reduce else f


# ---------------------------------------------------------------------------
# closed-form denominators


def pi_factors(n: int) -> tuple[tuple[Monomial, int], ...]:
    """Binomial factors of prod_i (1-s^i)(1-t^i) prod_{j<i} (1 - s^(i-j) t^j)^min(i, n+1-i)."""
    out: dict = defaultdict(int)
    for i in range(1, n + 1):
        out[(i, 0)] += 1
        out[(0, i)] += 1
        for j in range(1, i):
            out[(i - j, j)] += min(i, n + 1 - i)
    return tuple(out.items())


def denominator_pure(n: int) -> tuple[tuple[Monomial, int], ...]:
    """Lowest-terms denominator of the bigraded pure series (known for n <= 6)."""
    f = dict(pi_factors(n))
    if n == 6:
        f[(1, 1)] += 1
    return tuple(f.items())


def denominator_mixed_binomials(n: int) -> tuple[tuple[Monomial, int], ...]:
    """Same value as ``denominator_mixed`` written as binomials: (1-s^n)(1-t^n) traded for (1-s)(1-t)."""
    d = dict(denominator_pure(n))
    for u, v in (((n, 0), (1, 0)), ((0, n), (0, 1))):
        d[u] -= 1
        d[v] = d.get(v, 0) + 1
    return tuple((u, m) for u, m in d.items() if m)


def denominator_mixed(n: int) -> SparsePoly:
    """D(C)/((1+s+...+s^(n-1))(1+t+...+t^(n-1))) as an expanded polynomial."""
    p = dict(SparsePoly.const(1, ("s", "t")).terms)
    d = dict(denominator_pure(n))
    for u, m in d.items():
        p = mul_binomial_raw(p, u, m)
    for u in ((1, 0), (0, 1)):
        # (1 - x^n)/(1 - x) = 1 + ... + x^(n-1)
        p = div_binomial_raw(p, mono_pow(u, n))
        p = mul_binomial_raw(p, u, 1)
    return SparsePoly(p, ("s", "t"))


def numerator_over(f: RatFn, factors: Sequence[tuple[Monomial, int]]) -> SparsePoly:
    """Numerator of ``f`` when written over the binomial product ``factors``.

    Raises ``ArithmeticError`` if that product is not a multiple of f's denominator.
    """
    p = dict(f.numerator.terms)
    for u, m in factors:
        p = mul_binomial_raw(p, tuple(u), m)
    for u, m in f.denominator:
        for _ in range(m):
            q = div_binomial_raw(p, u)
            if q is None:
                raise ArithmeticError(f"denominator factor 1 - {u} does not divide")
            p = q
    return SparsePoly(p, f.names)


def numerator_over_poly(f: RatFn, den: SparsePoly) -> SparsePoly:
    """Numerator of ``f`` over an arbitrary (expanded) denominator polynomial."""
    p = dict((f.numerator * den).terms)
    for u, m in f.denominator:
        for _ in range(m):
            q = div_binomial_raw(p, u)
            if q is None:
                raise ArithmeticError(f"denominator factor 1 - {u} does not divide")
            p = q
    return SparsePoly(p, f.names)


def single_graded(f: RatFn) -> RatFn:
    """Set s = t and reduce."""
    return finish(f.diagonal("t"))


def cyclotomic_split(u: Monomial) -> tuple[Monomial, int]:
    return primitive_root(u)
