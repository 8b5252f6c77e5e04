import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracealg.polyrat import (RatFn, SparsePoly, TruncSeries, binomial_cover, dumps_ratfn,
                              functional_equation_check, loads, product_of_binomials, ratfn_expand,
                              ratfn_reduce, univariate_lowest_terms)

ST = ("s", "t")

monos = st.tuples(st.integers(0, 4), st.integers(0, 4))
polys = st.dictionaries(monos, st.integers(-5, 5), max_size=6).map(lambda d: SparsePoly(d, ST))
binomial_factors = st.lists(st.tuples(st.sampled_from([(1, 0), (0, 1), (1, 1), (2, 0), (1, 2)]),
                                      st.integers(1, 2)), min_size=1, max_size=3)


def brute_expand(num: SparsePoly, factors, degree: int) -> dict:
    """Expand num / prod (1 - u)**m by repeated multiplication with truncated geometric series."""
    acc = {m: c for m, c in num.terms.items() if sum(m) <= degree}
    for u, mult in factors:
        for _ in range(mult):
            geo = {}
            k = 0
            while k * sum(u) <= degree:
                geo[tuple(k * e for e in u)] = 1
                k += 1
            nxt: dict = {}
            for a, ca in acc.items():
                for b, cb in geo.items():
                    m = tuple(x + y for x, y in zip(a, b))
                    if sum(m) <= degree:
                        nxt[m] = nxt.get(m, 0) + ca * cb
            acc = nxt
    return {m: c for m, c in acc.items() if c}


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(polys, st.sampled_from([(1, 0), (1, 1), (2, 1)]))
def test_binomial_division_inverts_multiplication(a, u):
    assert a.mul_binomial(u).div_binomial(u) == a


@given(polys)
def test_reflect_is_an_involution(a):
    assert a.reflect((4, 4)).reflect((4, 4)) == a


@settings(max_examples=40)
@given(polys, binomial_factors)
def test_expansion_matches_brute_force(num, factors):
    f = RatFn(num, tuple(factors))
    got = ratfn_expand(f, 6)
    want = brute_expand(num, factors, 6)
    assert {m: c for m, c in got.coeffs.items() if c} == want


@settings(max_examples=40)
@given(polys, binomial_factors)
def test_text_format_round_trip(num, factors):
    f = RatFn(num, tuple(factors))
    back, _ = loads(dumps_ratfn(f))
    assert back.numerator == f.numerator
    assert back.denominator_poly() == f.denominator_poly()


@settings(max_examples=30)
@given(polys, binomial_factors)
def test_reduction_keeps_the_value(num, factors):
    # multiply a common factor in, then reduce it away
    f = RatFn(num.mul_binomial((1, 1)), tuple(factors) + (((1, 1), 1),))
    r = ratfn_reduce(f)
    assert ratfn_expand(r, 7) == ratfn_expand(f, 7)


def test_reduction_cancels_a_shared_binomial():
    f = RatFn(SparsePoly({(0, 0): 1, (1, 1): -1}, ST), (((1, 1), 1), ((1, 0), 1)))
    r = ratfn_reduce(f)
    assert r.numerator == SparsePoly.const(1, ST)
    assert dict(r.denominator) == {(1, 0): 1}


def test_univariate_lowest_terms_and_binomial_cover():
    # (1 + t) / (1 - t^2) = 1 / (1 - t)
    f = RatFn(SparsePoly.from_univariate([1, 1]), (((2,), 1),))
    num, den = univariate_lowest_terms(f)
    assert num == [1] and den == [1, -1]
    # (1 - t)^2 (1 + t) = (1 - t)(1 - t^2)
    assert sorted(binomial_cover([1, -1, -1, 1])) == [(1, 1), (2, 1)]
    assert binomial_cover([1, 1, 1]) is None  # 1 + t + t^2 alone is not a binomial product


def test_functional_equation():
    p = SparsePoly({(0, 0): 1, (1, 1): -1, (2, 2): 1}, ST)
    assert functional_equation_check(p, 2)
    assert not functional_equation_check(p, 3)
    q = SparsePoly({(0, 0): 1, (1, 0): 1, (1, 1): 1}, ST)
    assert not functional_equation_check(q, 1)  # reflection fine, s<->t symmetry fails
    assert functional_equation_check(SparsePoly.from_univariate([1, 3, 1]), 2)


def test_substitute_and_diagonal():
    x = SparsePoly.from_univariate([0, 2, 5], "x")
    lifted = x.substitute([(1, 1)], ST)
    assert lifted == SparsePoly({(1, 1): 2, (2, 2): 5}, ST)
    assert lifted.diagonal().univariate_coeffs() == [0, 0, 2, 0, 5]


def test_trunc_series_json_round_trip_and_product():
    a = TruncSeries.from_list([1, 1, 1, 1])
    b = TruncSeries.from_list([1, -1, 0, 0])
    assert (a * b).to_list() == [1, 0, 0, 0]
    assert TruncSeries.from_json(a.to_json()) == a
    assert json.loads(a.to_json())["coeffs"][0] == [0, 1]


def test_product_of_binomials():
    p = product_of_binomials((((1, 0), 1), ((0, 1), 1)), ST)
    assert p == SparsePoly({(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1}, ST)


def test_bad_text_is_rejected():
    with pytest.raises(ValueError):
        loads("1 0 0\n")
    with pytest.raises(ValueError):
        loads("# vars s t\n1 0\n")
