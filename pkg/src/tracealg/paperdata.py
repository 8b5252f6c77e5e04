"""Reference tables as fixtures, plus checks of the identities relating them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable

from .polyrat import (RatFn, SparsePoly, TruncSeries, functional_equation_check, loads,
                      product_of_binomials, ratfn_expand)

DATA_DIR = Path(__file__).parent / "data"


class MissingFixture(KeyError):
    pass


class IncompleteFixture(ValueError):
    """An elided fixture does not determine the full polynomial."""


@dataclass(frozen=True)
class Fixture:
    id: str
    kind: str
    poly: SparsePoly
    binomials: tuple
    header: dict

    @property
    def names(self) -> tuple[str, ...]:
        return self.poly.names

    def int_header(self, key: str) -> int:
        return int(self.header[key])


def fixture_ids() -> list[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.poly"))


@lru_cache(maxsize=None)
def load(fid: str) -> Fixture:
    path = DATA_DIR / f"{fid}.poly"
    if not path.exists():
        raise MissingFixture(fid)
    f, header = loads(path.read_text())
    kind = header.pop("kind", "polynomial")
    return Fixture(fid, kind, f.numerator, f.denominator, header)


# ---------------------------------------------------------------- elided polynomials

def _total(m) -> int:
    return sum(m)


def _mirror_degree(fx: Fixture) -> tuple[int, ...]:
    d = fx.int_header("mirror")
    return (d,) * fx.poly.nvars


def reconstruct_elided(fx: Fixture) -> SparsePoly:
    """Rebuild a palindromic polynomial from its stored head.

    Needs every term up to the middle total degree; the stored tail terms are then
    checked against the mirrored head.
    """
    d = _mirror_degree(fx)
    top = sum(d)
    k = fx.int_header("complete_through")
    if 2 * k < top:
        raise IncompleteFixture(f"{fx.id}: head complete to {k}, palindrome needs {top // 2}")
    half = (top + 1) // 2  # terms of degree < half are mirrored; degree top/2 is self-mirrored
    low = {m: c for m, c in fx.poly.terms.items() if _total(m) < half}
    mid = {m: c for m, c in fx.poly.terms.items() if 2 * _total(m) == top}
    out = dict(low)
    for m, c in low.items():
        out[tuple(a - b for a, b in zip(d, m))] = c
    out.update(mid)
    full = SparsePoly(out, fx.names)
    if not elided_consistent(fx, full):
        raise IncompleteFixture(f"{fx.id}: stored tail disagrees with the mirrored head")
    return full


def elided_consistent(fx: Fixture, full: SparsePoly) -> bool:
    """Every stored term appears in `full`, and the head is exhaustive up to its bound."""
    k = fx.int_header("complete_through")
    if any(full.coeff(m) != c for m, c in fx.poly.terms.items()):
        return False
    return all(fx.poly.coeff(m) == c for m, c in full.terms.items() if _total(m) <= k)


def polynomial(fid: str) -> SparsePoly:
    fx = load(fid)
    if fx.kind == "elided":
        return reconstruct_elided(fx)
    if fx.kind in ("polynomial", "list", "series", "table", "schur_expansion"):
        return fx.poly
    raise ValueError(f"{fid} is a {fx.kind}, not a polynomial")


def denominator(fid: str) -> tuple[SparsePoly, tuple]:
    """``(cofactor, binomials)`` with value ``cofactor * prod (1 - u)**m``."""
    fx = load(fid)
    if fx.kind != "denominator":
        raise ValueError(f"{fid} is not a denominator")
    return fx.poly, fx.binomials


def denominator_poly(fid: str) -> SparsePoly:
    cof, den = denominator(fid)
    return cof * product_of_binomials(den, cof.names)


def ratfn(num_id: str, den_id: str) -> RatFn:
    """Fixture pair as a RatFn; a univariate non-binomial cofactor is absorbed by
    multiplying through by the smallest ``1 - t**k`` it divides."""
    import flint

    num = polynomial(num_id)
    cof, den = denominator(den_id)
    if cof == SparsePoly.const(1, cof.names):
        return RatFn(num, den)
    if cof.nvars != 1:
        raise ValueError("only univariate cofactors are supported")
    c = flint.fmpz_poly(cof.univariate_coeffs())
    for k in range(1, 4 * c.degree() * c.degree() + 8):
        q, r = divmod(flint.fmpz_poly([1] + [0] * (k - 1) + [-1]), c)
        if r == 0:
            quot = SparsePoly.from_univariate([int(x) for x in q.coeffs()], cof.names[0])
            return RatFn(num * quot, tuple(den) + (((k,), 1),))
    raise ValueError(f"cofactor of {den_id} is not cyclotomic")


def series_list(fid: str) -> list[int]:
    fx = load(fid)
    top = fx.int_header("max_degree") if "max_degree" in fx.header else fx.int_header("length") - 1
    return [fx.poly.coeff((k,)) for k in range(top + 1)]


def table(fid: str) -> list[list[int]]:
    fx = load(fid)
    rows, cols = fx.int_header("rows"), fx.int_header("columns")
    return [[fx.poly.coeff((n, k)) for k in range(cols)] for n in range(rows)]


def schur_expansion(fid: str = "schur_expansion_pure_n5") -> dict[tuple[int, int], int]:
    return dict(load(fid).poly.terms)


# ---------------------------------------------------------------- degree-six numerators

ST = ("s", "t")


def _lift(p: SparsePoly, images) -> SparsePoly:
    return p.substitute(images, ST)


def _compressed_pure() -> SparsePoly:
    f1, f2, f3 = (polynomial(f"c6_numerator_part_f{i}") for i in (1, 2, 3))
    f = (_lift(f1, [(1, 1)])
         - _lift(f2, [(1, -1)]).shift((17, 33), 2)
         - f3.shift((1, 2))
         - f3.swap().shift((2, 1)))
    return f


def assemble_degree_six(kind: str = "pure") -> SparsePoly:
    """Full degree-six bigraded numerator from its compressed symmetric form."""
    if kind == "pure":
        f = _compressed_pure()
        return f + f.reflect((50, 50)) - SparsePoly.monomial((25, 25), ST, 18142)
    if kind == "mixed":
        g1 = _lift(polynomial("t6_numerator_part_g1"), [(1, 1)])
        g2 = polynomial("t6_numerator_part_g2")
        one_st = SparsePoly({(0, 0): 1, (1, 1): 1}, ST)
        first = one_st * (g1 + g1.reflect((44, 44)))
        # g2(1/t, 1/s) and g2(1/s, 1/t), scaled by (st)^42
        second = g2 + g2.swap().reflect((42, 42))
        third = g2.swap() + g2.reflect((42, 42))
        return first - second.shift((1, 2)) - third.shift((2, 1))
    raise ValueError("kind must be 'pure' or 'mixed'")


# ---------------------------------------------------------------- bigraded and single-graded values

def _ones(n: int, var: int) -> SparsePoly:
    terms = {}
    for i in range(n):
        m = [0, 0]
        m[var] = i
        terms[tuple(m)] = 1
    return SparsePoly(terms, ST)


def bigraded_numerator(n: int, variant: str = "pure") -> SparsePoly:
    if n == 6:
        return assemble_degree_six(variant)
    return polynomial(f"bigraded_{variant}_numerator_n{n}")


def bigraded_value(n: int, variant: str = "pure") -> RatFn:
    """Bigraded series as a RatFn over the binomial denominator of the pure case."""
    from .molien import denominator_pure
    num = bigraded_numerator(n, variant)
    if variant == "mixed":
        num = num * _ones(n, 0) * _ones(n, 1)
    return RatFn(num, denominator_pure(n))


def mixed_denominator_binomials(n: int) -> tuple:
    from .molien import denominator_mixed_binomials
    return denominator_mixed_binomials(n)


def single_graded_value(n: int, variant: str = "pure") -> RatFn:
    return ratfn(f"{variant}_numerator_n{n}", f"{variant}_denominator_n{n}")


# ---------------------------------------------------------------- checks

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "status": "pass" if self.passed else "fail", **self.detail}


def _first_diff(a: list, b: list) -> dict | None:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return {"index": i, "expected": y, "got": x}
    if len(a) != len(b):
        return {"length": [len(a), len(b)]}
    return None


def _poly_diff(a: SparsePoly, b: SparsePoly) -> dict | None:
    for m in sorted(set(a.terms) | set(b.terms), key=lambda m: (sum(m), m)):
        if a.coeff(m) != b.coeff(m):
            return {"monomial": list(m), "expected": b.coeff(m), "got": a.coeff(m)}
    return None


def _result(name: str, diffs: list[tuple[str, dict | None]], **extra) -> CheckResult:
    bad = [(label, d) for label, d in diffs if d is not None]
    detail = dict(extra)
    detail["cases"] = len(diffs)
    if bad:
        detail["first_failure"] = {"case": bad[0][0], **bad[0][1]}
    return CheckResult(name, not bad, detail)


def _univ(coeffs: list[int]) -> SparsePoly:
    return SparsePoly.from_univariate(coeffs, "t")


def _prod(*ps: SparsePoly) -> SparsePoly:
    out = ps[0]
    for p in ps[1:]:
        out = out * p
    return out


def check_denominator_relation(n: int | None = None) -> CheckResult:
    """(1-s)(1-t) D(C) = (1-s^n)(1-t^n) D(T): stored pair at n = 5 and the closed forms for n <= 6."""
    from .molien import denominator_pure
    diffs = []
    dc, dt = denominator_poly("bigraded_pure_denominator_n5"), denominator_poly("bigraded_mixed_denominator_n5")
    lhs = dc.mul_binomial((1, 0)).mul_binomial((0, 1))
    rhs = dt.mul_binomial((5, 0)).mul_binomial((0, 5))
    diffs.append(("stored n=5", _poly_diff(lhs, rhs)))
    for k in ([n] if n else range(1, 7)):
        pc = product_of_binomials(denominator_pure(k), ST)
        pt = product_of_binomials(mixed_denominator_binomials(k), ST)
        diffs.append((f"closed form n={k}",
                      _poly_diff(pc.mul_binomial((1, 0)).mul_binomial((0, 1)),
                                 pt.mul_binomial((k, 0)).mul_binomial((0, k)))))
    for k in ([n] if n and n <= 4 else []):
        # engine output must be a polynomial over the closed-form mixed denominator
        from .molien import poincare_bigraded
        from .molien import numerator_over as over
        try:
            over(poincare_bigraded(k, "mixed"), mixed_denominator_binomials(k))
            over(poincare_bigraded(k, "pure"), denominator_pure(k))
            diffs.append((f"engine n={k}", None))
        except ArithmeticError as e:
            diffs.append((f"engine n={k}", {"error": str(e)}))
    return _result("denominator_relation", diffs)


def check_pi_denominator(n: int | None = None) -> CheckResult:
    """Stored n = 5 denominators equal the product formula (pure) and its mixed variant."""
    from .molien import pi_factors
    pure = product_of_binomials(pi_factors(5), ST)
    mixed = product_of_binomials(mixed_denominator_binomials(5), ST)
    return _result("pi_denominator", [
        ("pure", _poly_diff(denominator_poly("bigraded_pure_denominator_n5"), pure)),
        ("mixed", _poly_diff(denominator_poly("bigraded_mixed_denominator_n5"), mixed)),
    ])


def check_numerator_vanishing(n: int | None = None) -> CheckResult:
    """N(1,1) = 0 for both numerators at n >= 5 (which rules out a bigraded parameter system)."""
    diffs = []
    for k in ([n] if n else (5, 6)):
        for variant in ("pure", "mixed"):
            v = bigraded_numerator(k, variant).evaluate((1, 1))
            diffs.append((f"{variant} n={k}", None if v == 0 else {"value": v}))
    return _result("numerator_vanishing_at_one", diffs)


def _diag_gcd(num: SparsePoly, den: SparsePoly) -> list[int]:
    import flint
    g = flint.fmpz_poly(num.diagonal().univariate_coeffs()).gcd(
        flint.fmpz_poly(den.diagonal().univariate_coeffs()))
    c = [int(x) for x in g.coeffs()]
    return [-x for x in c] if c[0] < 0 else c


def check_diagonal_gcd(n: int | None = None) -> CheckResult:
    """gcd(N(t,t), D(t,t)) equals the stored list, for the pure and the mixed series alike."""
    from .molien import denominator_mixed, denominator_pure
    diffs = []
    for k in ([n] if n else (4, 5, 6)):
        expected = polynomial(f"diagonal_gcd_n{k}").univariate_coeffs()
        dc = product_of_binomials(denominator_pure(k), ST)
        dt = denominator_mixed(k)
        for variant, den in (("pure", dc), ("mixed", dt)):
            got = _diag_gcd(bigraded_numerator(k, variant), den)
            diffs.append((f"{variant} n={k}", _first_diff(got, expected)))
    return _result("diagonal_gcd", diffs)


EXTENDED_MULTIPLIERS = {
    ("pure", 3): [[1, 0, 1]],
    ("pure", 4): [[1, 0, 1], [1, 1, 1], [1, 0, 0, 1], [1, 0, 0, 1]],
    ("pure", 5): [[1, -1, 1], [1, -1, 1], [1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 1, 0, 1]],
    ("mixed", 4): [[1, 1, 1]],
    ("mixed", 5): [[1, 1], [1, 0, 1]],
}
BIGRADED_EXTENDED_MULTIPLIERS = {3: [(1, 1)], 4: [(1, 1), (1, 2), (2, 1)]}


def check_extended_forms(n: int | None = None) -> CheckResult:
    """Nonnegative extended numerators are the stored multiples of the lowest-terms ones."""
    from .molien import pi_factors
    diffs = []
    for (variant, k), factors in EXTENDED_MULTIPLIERS.items():
        if n and k != n:
            continue
        mult = _prod(*[_univ(f) for f in factors])
        num = polynomial(f"{variant}_numerator_n{k}")
        ext = load(f"{variant}_extended_numerator_n{k}")
        target = mult * num
        if ext.kind == "elided":
            diffs.append((f"{variant} N* n={k}", None if elided_consistent(ext, target) else {"elided": "mismatch"}))
        else:
            diffs.append((f"{variant} N* n={k}", _poly_diff(target, ext.poly)))
        diffs.append((f"{variant} D* n={k}",
                      _poly_diff(mult * denominator_poly(f"{variant}_denominator_n{k}"),
                                 denominator_poly(f"{variant}_extended_denominator_n{k}"))))
        diffs.append((f"{variant} N* n={k} nonnegative",
                      None if all(c >= 0 for _, c in target) else {"negative": True}))
    for k, monos in BIGRADED_EXTENDED_MULTIPLIERS.items():
        if n and k != n:
            continue
        mult = _prod(*[SparsePoly({(0, 0): 1, m: 1}, ST) for m in monos])
        target = mult * polynomial(f"bigraded_pure_numerator_n{k}")
        ext = load(f"bigraded_pure_extended_numerator_n{k}")
        ok = elided_consistent(ext, target) if ext.kind == "elided" else target == ext.poly
        diffs.append((f"bigraded N* n={k}", None if ok else {"mismatch": True}))
        dpoly = product_of_binomials(pi_factors(k), ST)
        diffs.append((f"bigraded D* n={k}",
                      _poly_diff(mult * dpoly, denominator_poly(f"bigraded_pure_extended_denominator_n{k}"))))
    return _result("extended_forms", diffs)


def _numerator_fixtures() -> list[str]:
    return [f for f in fixture_ids()
            if ("numerator_n" in f or "numerator_n" in f.replace("_expanded", "")) and "part" not in f]


def check_palindromic_numerators(n: int | None = None) -> CheckResult:
    """Every stored numerator satisfies its functional equation; elided tails match the mirror."""
    diffs = []
    for fid in _numerator_fixtures():
        try:
            p = polynomial(fid)
        except IncompleteFixture:
            continue
        d = max(m[0] for m in p.terms)
        diffs.append((fid, None if functional_equation_check(p, d) else {"degree": d}))
    for kind in ("pure", "mixed"):
        p = assemble_degree_six(kind)
        d = max(m[0] for m in p.terms)
        diffs.append((f"assembled {kind} n=6", None if functional_equation_check(p, d) else {"degree": d}))
    return _result("palindromic_numerators", diffs)


def check_special_nonnegative(n: int | None = None) -> CheckResult:
    """Torus and SL2 invariant numerators have nonnegative coefficients."""
    diffs = []
    for fid in fixture_ids():
        if fid.startswith(("sharp_numerator", "bullet_numerator")):
            p = polynomial(fid)
            neg = [m for m, c in p.terms.items() if c < 0]
            diffs.append((fid, {"negative_at": list(neg[0])} if neg else None))
    return _result("special_numerators_nonnegative", diffs)


def check_sl2_cross(n: int | None = None) -> CheckResult:
    """Coefficient of t^(2k) in the SL2-invariant series equals the f_{k,k} multiplicity, k <= 12."""
    schur = schur_expansion()
    sharp = series_list("sharp_series_n5")
    diffs = [(f"k={k}", None if sharp[2 * k] == schur.get((k, k), 0) else
              {"series": sharp[2 * k], "schur": schur.get((k, k), 0)}) for k in range(13)]
    return _result("sl2_cross_check", diffs)


def check_torus_cross(n: int | None = None) -> CheckResult:
    """Coefficient of t^(2k) in the torus-invariant series equals the module length in degree 2k."""
    schur = schur_expansion()
    bullet = series_list("bullet_series_n5")
    diffs = []
    for k in range(13):
        length = sum(c for (p, q), c in schur.items() if p + q == 2 * k)
        diffs.append((f"k={k}", None if bullet[2 * k] == length else {"series": bullet[2 * k], "length": length}))
    return _result("torus_cross_check", diffs)


def check_degree_six_assembly(n: int | None = None) -> CheckResult:
    """Degree-six numerators: term counts, leading term, functional equation, symmetry, N(1,1)=0."""
    diffs = []
    for kind, count, top in (("pure", 1169, 50), ("mixed", 854, 45)):
        p = assemble_degree_six(kind)
        diffs.append((f"{kind} terms", None if len(p) == count else {"expected": count, "got": len(p)}))
        lead = max(p.terms, key=sum)
        diffs.append((f"{kind} leading", None if lead == (top, top) and p.coeff(lead) == 1
                      else {"leading": list(lead)}))
        diffs.append((f"{kind} functional equation",
                      None if functional_equation_check(p, top) else {"degree": top}))
        diffs.append((f"{kind} at (1,1)", None if p.evaluate((1, 1)) == 0 else {"value": p.evaluate((1, 1))}))
    return _result("degree_six_assembly", diffs)


def check_fixture_series(n: int | None = None, degree: int = 19) -> CheckResult:
    """Stored rational functions, expanded, reproduce the stored Taylor coefficients."""
    diffs = []
    for k in ([n] if n else range(1, 7)):
        for variant in ("pure", "mixed"):
            want = series_list(f"{variant}_series_n{k}")[: degree + 1]
            got = ratfn_expand(single_graded_value(k, variant), degree).to_list()
            diffs.append((f"{variant} single n={k}", _first_diff(got, want)))
            if k >= 5:
                big = ratfn_expand(bigraded_value(k, variant).diagonal(), degree).to_list()
                diffs.append((f"{variant} bigraded n={k}", _first_diff(big, want)))
    for k in ([n] if n else range(1, 6)):
        for kind in ("sharp", "bullet"):
            if kind == "sharp" and k < 2:
                continue
            want = series_list(f"{kind}_series_n{k}")
            got = ratfn_expand(ratfn(f"{kind}_numerator_n{k}", f"{kind}_denominator_n{k}"), len(want) - 1).to_list()
            diffs.append((f"{kind} n={k}", _first_diff(got, want)))
    return _result("fixture_series", diffs)


def check_single_graded_reduction(n: int | None = None) -> CheckResult:
    """Bigraded fixtures at s = t, reduced to lowest terms, give the stored single-graded pairs."""
    from .molien import single_graded
    diffs = []
    for k in ([n] if n else range(1, 7)):
        for variant in ("pure", "mixed"):
            got = single_graded(bigraded_value(k, variant))
            want = single_graded_value(k, variant)
            same = got.numerator == want.numerator and \
                got.denominator_poly() == want.denominator_poly()
            diffs.append((f"{variant} n={k}", None if same else {"got": str(got)[:200]}))
    return _result("single_graded_reduction", diffs)


def check_column_stabilization(n: int | None = None) -> CheckResult:
    """Coefficient tables: column k is constant from row k on; diagonal matches the limit product."""
    from .symchar import limit_products
    rows = table("pure_coefficient_table")
    limit, _ = limit_products(len(rows[0]) - 1)
    diffs = []
    for k in range(len(rows[0])):
        col = [rows[r][k] for r in range(k, len(rows))]
        diffs.append((f"column {k}", None if len(set(col)) == 1 else {"values": col}))
        diffs.append((f"diagonal {k}", None if rows[k][k] == limit[k] else {"table": rows[k][k], "product": limit[k]}))
    prefix = series_list("pure_limit_prefix")
    diffs.append(("limit prefix", _first_diff(limit[: len(prefix)], prefix)))
    return _result("column_stabilization", diffs)


def check_mixed_limit(n: int | None = None) -> CheckResult:
    """Mixed table rows agree with the mixed limit product below the diagonal (k <= n - 1)."""
    from .symchar import limit_products
    rows = table("mixed_coefficient_table")
    _, limit = limit_products(len(rows[0]) - 1)
    diffs = []
    for r, row in enumerate(rows):
        for k in range(min(r, len(row))):
            diffs.append((f"row {r} column {k}", None if row[k] == limit[k] else {"table": row[k], "product": limit[k]}))
    return _result("mixed_limit", diffs)


def check_second_differences(n: int | None = None) -> CheckResult:
    """Second differences of the coefficient table reproduce the stored alpha sequence."""
    from .symchar import coefficient_table, second_differences
    rows = table("pure_coefficient_table")
    want = series_list("second_differences")
    got = second_differences(dict(enumerate(rows)), (len(rows) + 1) // 2)
    engine = second_differences(coefficient_table(len(want), 2 * len(want) - 2), len(want))
    return _result("second_differences", [("from table", _first_diff(got, want[: len(got)])),
                                          ("from character engine", _first_diff(engine, want))])


def check_mixed_second_differences(n: int | None = None) -> CheckResult:
    """Mixed table: second differences with n = max(k + 3, 3) from k = -1 reproduce the stored list."""
    from .symchar import coefficient_table, second_differences
    rows = table("mixed_coefficient_table")
    want = series_list("mixed_second_differences")
    fits = len(rows) - 3  # needs row k + 3
    got = second_differences(dict(enumerate(rows)), fits, first=-1, offset=3, floor=3)
    engine = second_differences(coefficient_table(len(want) + 2, 2 * len(want) + 2, mixed=True),
                                len(want), first=-1, offset=3, floor=3)
    return _result("mixed_second_differences", [("from table", _first_diff(got, want[:fits])),
                                                ("from character engine", _first_diff(engine, want))])


def check_generator_degrees(n: int | None = None) -> CheckResult:
    """Degree census of the 32-element generating set matches the module's degree polynomial."""
    from .tracelab import generator_set
    census = generator_set("gen1").degrees()
    want = polynomial("c4_generator_degrees")
    got = SparsePoly({(d,): c for d, c in census.items()}, ("t",))
    return _result("generator_degrees", [("gen1", _poly_diff(got, want))])


def check_engine_bigraded(n: int | None = None) -> CheckResult:
    """Residue engine output equals the stored numerators over the product denominators (n <= 4)."""
    from .molien import denominator_mixed, denominator_pure, numerator_over, numerator_over_poly, poincare_bigraded
    diffs = []
    for k in ([n] if n else range(1, 5)):
        pure = poincare_bigraded(k, "pure")
        diffs.append((f"pure n={k}", _poly_diff(numerator_over(pure, denominator_pure(k)),
                                                bigraded_numerator(k, "pure"))))
        mixed = poincare_bigraded(k, "mixed")
        diffs.append((f"mixed n={k}", _poly_diff(numerator_over_poly(mixed, denominator_mixed(k)),
                                                 bigraded_numerator(k, "mixed"))))
    return _result("engine_bigraded", diffs)


def check_schur_expansion(n: int | None = None, degree: int = 25) -> CheckResult:
    """Character-engine Schur expansion for n = 5 equals the stored expansion."""
    from .symchar import formanek_pure
    exps, _ = formanek_pure(5, degree)
    got = {}
    for e in exps:
        got.update({k: v for k, v in e.coeffs.items() if v})
    want = {k: v for k, v in schur_expansion().items() if sum(k) <= degree}
    diffs = []
    for key in sorted(set(got) | set(want), key=lambda k: (sum(k), -k[0])):
        if got.get(key, 0) != want.get(key, 0):
            diffs.append((f"f_{key}", {"expected": want.get(key, 0), "got": got.get(key, 0)}))
            break
    diffs.append(("all", None))
    return _result("schur_expansion", diffs)


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "denominator_relation": check_denominator_relation,
    "pi_denominator": check_pi_denominator,
    "numerator_vanishing_at_one": check_numerator_vanishing,
    "diagonal_gcd": check_diagonal_gcd,
    "extended_forms": check_extended_forms,
    "palindromic_numerators": check_palindromic_numerators,
    "special_numerators_nonnegative": check_special_nonnegative,
    "sl2_cross_check": check_sl2_cross,
    "torus_cross_check": check_torus_cross,
    "degree_six_assembly": check_degree_six_assembly,
    "fixture_series": check_fixture_series,
    "single_graded_reduction": check_single_graded_reduction,
    "column_stabilization": check_column_stabilization,
    "mixed_limit": check_mixed_limit,
    "second_differences": check_second_differences,
    "mixed_second_differences": check_mixed_second_differences,
    "generator_degrees": check_generator_degrees,
    "engine_bigraded": check_engine_bigraded,
    "schur_expansion": check_schur_expansion,
}


ALIASES: dict[str, tuple[str, int | None]] = {
    "n11_vanishing": ("numerator_vanishing_at_one", None),
    "gcd_n4": ("diagonal_gcd", 4),
    "gcd_n5": ("diagonal_gcd", 5),
    "gcd_n6": ("diagonal_gcd", 6),
}


def check_identity(name: str, n: int | None = None) -> CheckResult:
    if name in ALIASES:
        name, fixed = ALIASES[name]
        n = fixed if fixed is not None else n
    if name not in CHECKS:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(list(CHECKS) + list(ALIASES))}")
    return CHECKS[name](n)


# ---------------------------------------------------------------- Taylor regression

ENGINES = ("formanek", "molien", "fixture")


def engine_series(series_id: str, engine: str, degree: int) -> list[int]:
    """Single-graded coefficients 0..degree for a series id such as ``pure_series_n5``."""
    family, n = series_id.rsplit("_n", 1)
    n = int(n)
    if engine == "formanek":
        from .symchar import formanek_mixed, formanek_pure, single_graded
        if family == "pure_series":
            return single_graded(formanek_pure(n, degree)[1])[: degree + 1]
        if family == "mixed_series":
            return single_graded(formanek_mixed(n, degree)[1])[: degree + 1]
        if family == "pure_tracezero_series":
            full = single_graded(formanek_pure(n, degree)[1])
            ts = TruncSeries.from_list(full) * TruncSeries.from_list([1, -2, 1] + [0] * degree)
            return ts.truncate(degree).to_list()[: degree + 1]
        raise ValueError(f"formanek engine has no {family}")
    if engine == "molien":
        from . import molien
        if family in ("pure_series", "mixed_series"):
            f = molien.poincare_bigraded(n, family.split("_")[0]).diagonal() if n else None
            return ratfn_expand(f, degree).to_list() if f else [1] + [0] * degree
        if family == "sharp_series":
            return ratfn_expand(molien.poincare_sharp(n), degree).to_list()
        if family == "bullet_series":
            return ratfn_expand(molien.poincare_bullet(n), degree).to_list()
        raise ValueError(f"molien engine has no {family}")
    if engine == "fixture":
        if n == 0:
            return [1] + [0] * degree
        kind = family.replace("_series", "")
        if kind in ("pure", "mixed", "sharp", "bullet"):
            return ratfn_expand(ratfn(f"{kind}_numerator_n{n}", f"{kind}_denominator_n{n}"), degree).to_list()
        if kind == "pure_tracezero":
            full = engine_series(f"pure_series_n{n}", "fixture", degree)
            ts = TruncSeries.from_list(full) * TruncSeries.from_list([1, -2, 1] + [0] * degree)
            return ts.truncate(degree).to_list()[: degree + 1]
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def taylor_regression(series_id: str, engine: str = "formanek", degree: int | None = None) -> CheckResult:
    want = series_list(series_id)
    degree = len(want) - 1 if degree is None else min(degree, len(want) - 1)
    got = engine_series(series_id, engine, degree)[: degree + 1]
    diff = _first_diff(got, want[: degree + 1])
    return _result(f"taylor:{series_id}:{engine}", [(series_id, diff)], degree=degree)
