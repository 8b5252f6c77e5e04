import pytest

from tracealg import paperdata
from tracealg.polyrat import RatFn, SparsePoly, dumps_ratfn, loads, ratfn_expand


@pytest.mark.parametrize("fid", paperdata.fixture_ids())
def test_fixture_parses_and_round_trips(fid):
    fx = paperdata.load(fid)
    assert fx.kind in {"polynomial", "elided", "denominator", "series", "table", "list", "schur_expansion"}
    back, header = loads(dumps_ratfn(RatFn(fx.poly, fx.binomials), {"kind": fx.kind, **fx.header}))
    assert back.numerator == fx.poly
    assert dict(back.denominator) == dict(fx.binomials)


def test_fixture_count():
    assert len(paperdata.fixture_ids()) == 113


def test_missing_fixture():
    with pytest.raises(paperdata.MissingFixture):
        paperdata.load("no_such_table")


def test_elided_reconstruction_recovers_the_leading_term():
    p = paperdata.polynomial("bigraded_pure_numerator_n5")
    top = max(p.terms, key=sum)
    assert top == (23, 23) and p.coeff(top) == 1
    assert paperdata.polynomial("pure_numerator_n6").univariate_coeffs()[-1] == 1


def test_prefix_too_short_is_refused():
    fx = paperdata.load("bigraded_pure_numerator_n5")
    short = paperdata.Fixture(fx.id, fx.kind, fx.poly, fx.binomials, {**fx.header, "complete_through": "5"})
    with pytest.raises(paperdata.IncompleteFixture):
        paperdata.reconstruct_elided(short)


def test_tampered_tail_is_detected():
    fx = paperdata.load("bigraded_pure_numerator_n5")
    terms = dict(fx.poly.terms)
    terms[(23, 23)] = 2
    bad = paperdata.Fixture(fx.id, fx.kind, SparsePoly(terms, fx.names), fx.binomials, fx.header)
    with pytest.raises(paperdata.IncompleteFixture):
        paperdata.reconstruct_elided(bad)


def test_degree_six_assembly():
    pure = paperdata.assemble_degree_six("pure")
    mixed = paperdata.assemble_degree_six("mixed")
    assert len(pure) == 1169 and len(mixed) == 854
    assert max(pure.terms, key=sum) == (50, 50)
    assert pure.evaluate((1, 1)) == 0 and mixed.evaluate((1, 1)) == 0
    assert len(paperdata.polynomial("c6_numerator_part_f3")) == 276
    assert len(paperdata.polynomial("t6_numerator_part_g2")) == 206
    with pytest.raises(ValueError):
        paperdata.assemble_degree_six("other")


def test_cyclotomic_cofactor_is_absorbed():
    f = paperdata.ratfn("sharp_numerator_n5", "sharp_denominator_n5")
    assert all(len(u) == 1 for u, _ in f.denominator)
    assert ratfn_expand(f, 25).to_list() == paperdata.series_list("sharp_series_n5")


@pytest.mark.parametrize("name", sorted(paperdata.CHECKS))
def test_identity_checks_pass(name):
    result = paperdata.check_identity(name)
    assert result.passed, result.detail


@pytest.mark.parametrize("alias,n", [("gcd_n4", None), ("n11_vanishing", 5), ("denominator_relation", 4)])
def test_named_examples(alias, n):
    assert paperdata.check_identity(alias, n).passed


def test_gcd_n4_value():
    assert paperdata.polynomial("diagonal_gcd_n4").univariate_coeffs() == [1, 1, 1]


def test_unknown_identity():
    with pytest.raises(KeyError):
        paperdata.check_identity("nope")


def test_failure_report_carries_first_difference():
    r = paperdata._result("demo", [("a", None), ("b", {"index": 3, "expected": 1, "got": 2})])
    assert not r.passed
    assert r.to_json()["first_failure"] == {"case": "b", "index": 3, "expected": 1, "got": 2}


@pytest.mark.parametrize("sid,engine,degree,last", [
    ("pure_series_n5", "formanek", 19, 483792),
    ("pure_series_n6", "formanek", 19, 904056),
    ("mixed_series_n6", "fixture", 19, 13089748),
    ("mixed_series_n6", "formanek", 19, 13089748),
])
def test_taylor_regression_anchors(sid, engine, degree, last):
    assert paperdata.series_list(sid)[degree] == last
    assert paperdata.taylor_regression(sid, engine, degree).passed


def test_trivial_series():
    assert paperdata.engine_series("pure_series_n0", "formanek", 5) == [1, 0, 0, 0, 0, 0]
    assert paperdata.taylor_regression("pure_series_n0", "formanek").passed
