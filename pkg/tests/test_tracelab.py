import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracealg import symchar, tracelab
from tracealg.tracelab import (FULL, SamplePoint, TraceCombination, TraceWord, eval_trace, exact_rank,
                               generator_set, graded_dimension, graded_dimension_exact)

words = st.text(alphabet="xy", min_size=1, max_size=8)


def test_word_notation():
    assert tracelab.expand_word("x^2(y^2x)^2") == "xxyyxyyx"
    assert tracelab.compact("xxxyy") == "x^3y^2"
    assert str(TraceWord("yxx")) == "x^2y"
    assert TraceWord.parse("x^4(y^2x^2)^2y").degree == 13


def test_combination_must_be_bihomogeneous():
    with pytest.raises(ValueError):
        TraceCombination.parse("xy-x^2")
    with pytest.raises(ValueError):
        TraceCombination.parse("xy-yx")  # cancels to zero


def test_generator_set_sizes_and_degrees():
    assert len(generator_set("ter1")) == 17
    assert len(generator_set("gen1")) == 32
    assert len(generator_set("gen1_alt")) == 32
    assert len(generator_set("p171")) == 171
    assert generator_set("gen1").degrees() == {1: 2, 2: 3, 3: 4, 4: 6, 5: 2, 6: 4, 7: 2, 8: 4, 9: 4, 10: 1}
    assert len(tracelab.unitary_test_words()) == 20
    with pytest.raises(KeyError):
        generator_set("nope")


def test_necklace_counts():
    # binary necklaces of length 1..8
    assert [len(tracelab.necklaces(k)) for k in range(1, 9)] == [2, 3, 4, 6, 8, 14, 20, 36]


@settings(max_examples=50, deadline=None)
@given(words, st.integers(0, 7), st.integers(0, 2**31))
def test_trace_is_cyclic(w, shift, seed):
    p = SamplePoint.random(3, np.random.default_rng(seed))
    k = shift % len(w)
    assert eval_trace(TraceWord(w), p) == eval_trace(TraceWord(w[k:] + w[:k]), p)


def _conjugate(p: SamplePoint, g) -> SamplePoint:
    from fractions import Fraction
    g = [[Fraction(v) for v in row] for row in g]
    n = len(g)
    # inverse by Gauss-Jordan over the rationals
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        a[c] = [v / a[c][c] for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                a[r] = [x - a[r][c] * y for x, y in zip(a[r], a[c])]
    inv = [row[n:] for row in a]

    def mm(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return SamplePoint(n, mm(mm(g, p.X), inv), mm(mm(g, p.Y), inv))


@settings(max_examples=50, deadline=None)
@given(words, st.integers(0, 2**31))
def test_trace_is_conjugation_invariant(w, seed):
    rng = np.random.default_rng(seed)
    p = SamplePoint.random(3, rng)
    g = rng.integers(-3, 4, size=(3, 3))
    while round(np.linalg.det(g)) == 0:
        g = rng.integers(-3, 4, size=(3, 3))
    assert eval_trace(TraceWord(w), p) == eval_trace(TraceWord(w), _conjugate(p, g.tolist()))


def test_trace_zero_projection():
    p = SamplePoint.random(4, np.random.default_rng(1), trace_zero=True)
    assert eval_trace("x", p) == 0 and eval_trace("y", p) == 0


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == 3
    assert exact_rank([]) == 0


@pytest.mark.parametrize("n,d", [(2, 3), (2, 4), (3, 4)])
def test_modular_rank_matches_exact_rank(n, d):
    assert graded_dimension(n, FULL, d).total == graded_dimension_exact(n, FULL, d)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_full_dimensions_match_character_engine(n):
    D = 6
    series = symchar.single_graded(symchar.formanek_pure(n, D)[1])
    for d in range(1, D + 1):
        assert graded_dimension(n, FULL, d).total == series[d]


def test_subalgebra_is_bounded_by_full_algebra():
    ter = generator_set("ter1")
    for d in range(1, 7):
        assert graded_dimension(4, ter, d).total <= graded_dimension(4, FULL, d).total


def test_alternate_words_give_the_same_dimensions():
    a, b = generator_set("gen1"), generator_set("gen1_alt")
    for d in (5, 6, 7, 8):
        assert graded_dimension(4, a, d).by_bidegree == graded_dimension(4, b, d).by_bidegree


def test_verification_report_deficit():
    rep = tracelab.verify_generating_set(4, generator_set("ter1"), 5)
    assert rep.first_deficit() == (5, 2)
    assert not rep.passed


def test_seeded_runs_are_reproducible():
    a = graded_dimension(3, FULL, 5, seed=11)
    b = graded_dimension(3, FULL, 5, seed=11)
    assert a == b


# ---------------------------------------------------------------- unitary similarity

def test_conjugated_pair_is_similar_and_witness_found_otherwise():
    rng = np.random.default_rng(3)
    a = tracelab.random_complex(4, rng)
    u = tracelab.random_unitary(4, rng)
    assert tracelab.unitary_similar(a, u @ a @ u.conj().T).similar
    v = tracelab.unitary_similar(a, a + np.eye(4))
    assert not v.similar and v.witness == "x"
    assert v.to_json() == {"verdict": "not_similar", "witness": "x", "words_checked": 1}


def test_similar_but_not_unitarily_similar_is_detected():
    rng = np.random.default_rng(4)
    a = tracelab.random_complex(4, rng)
    g = tracelab.random_complex(4, rng) + 2 * np.eye(4)
    b = g @ a @ np.linalg.inv(g)
    assert not tracelab.unitary_similar(a, b).similar
    assert not tracelab.exhaustive_word_test(a, b, 6).similar


def test_unitary_test_rejects_wrong_shape():
    with pytest.raises(ValueError):
        tracelab.unitary_similar(np.eye(3), np.eye(3))


def test_exhaustive_test_on_3x3():
    rng = np.random.default_rng(5)
    a = tracelab.random_complex(3, rng)
    u = tracelab.random_unitary(3, rng)
    assert tracelab.exhaustive_word_test(a, u @ a @ u.conj().T, 9).similar
    assert not tracelab.exhaustive_word_test(a, a.T, 9).similar
