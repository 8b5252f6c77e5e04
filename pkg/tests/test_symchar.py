import itertools
import math
from fractions import Fraction

import pytest

from tracealg import molien, paperdata, symchar
from tracealg.polyrat import ratfn_expand


def hook_length_dimension(mu) -> int:
    """Independent oracle: number of standard tableaux by the hook length formula."""
    mu = list(mu)
    conj = [sum(1 for p in mu if p > j) for j in range(mu[0])] if mu else []
    hooks = 1
    for i, row in enumerate(mu):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(mu)) // hooks


@pytest.mark.parametrize("k", range(1, 11))
def test_character_orthogonality(k):
    ps, table = symchar.character_table(k)
    weights = [Fraction(1, symchar.z_order(rho)) for rho in ps]
    for i, j in itertools.combinations_with_replacement(range(len(ps)), 2):
        inner = sum(w * a * b for w, a, b in zip(weights, table[i], table[j]))
        assert inner == (1 if i == j else 0)


@pytest.mark.parametrize("k", range(1, 11))
def test_dimensions_agree_with_hook_lengths(k):
    ps = symchar.partitions(k)
    dims = [symchar.dimension(mu) for mu in ps]
    assert dims == [hook_length_dimension(mu) for mu in ps]
    assert sum(d * d for d in dims) == math.factorial(k)


def test_small_table_by_hand():
    # S_3, classes (3), (2,1), (1,1,1)
    assert [symchar.char_value((2, 1), rho) for rho in [(3,), (2, 1), (1, 1, 1)]] == [-1, 0, 2]
    assert [symchar.char_value((1, 1, 1), rho) for rho in [(3,), (2, 1), (1, 1, 1)]] == [1, -1, 1]


def test_weight_mismatch_is_rejected():
    with pytest.raises(ValueError):
        symchar.char_value((2,), (1,))


@pytest.mark.parametrize("k", range(1, 9))
def test_kronecker_symmetry_and_trivial_factor(k):
    ps = symchar.partitions(k)
    for lam, mu, nu in itertools.combinations_with_replacement(ps, 3):
        g = symchar.kronecker_coeff(lam, mu, nu)
        assert g >= 0
        for perm in set(itertools.permutations((lam, mu, nu))):
            assert symchar.kronecker_coeff(*perm) == g
    for lam in ps:
        for mu in ps:
            assert symchar.kronecker_coeff(lam, mu, (k,)) == (1 if lam == mu else 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_formanek_matches_residue_engine(n):
    D = 12
    for variant, engine in (("pure", symchar.formanek_pure), ("mixed", symchar.formanek_mixed)):
        _, series = engine(n, D)
        assert series == ratfn_expand(molien.poincare_bigraded(n, variant), D)


def test_schur_expansion_anchors_n5():
    exps, _ = symchar.formanek_pure(5, 25)
    by_degree = {e.k: e.coeffs for e in exps}
    assert by_degree[6][(4, 2)] == 15
    assert by_degree[24][(12, 12)] == 41569
    assert by_degree[25][(13, 12)] == 120672


def test_schur_expansion_bigraded_dimension():
    exps, series = symchar.formanek_pure(4, 10)
    for e in exps:
        assert e.dimension() == sum(c for (a, b), c in series.coeffs.items() if a + b == e.k)
        assert e.ordered() == sorted(e.ordered(), key=lambda kv: -(kv[0][0] - kv[0][1]))


def test_single_graded_values_n5():
    _, series = symchar.formanek_pure(5, 19)
    assert symchar.single_graded(series)[19] == 483792


def test_limit_products_and_second_differences():
    pure, mixed = symchar.limit_products(6)
    assert pure == [1, 2, 6, 14, 34, 74, 166]
    table = symchar.coefficient_table(7, 12)
    assert symchar.second_differences(table, 6) == [1, 3, 11, 33, 98, 270]
    # column k is constant once n >= k
    for k in range(7):
        assert len({table[n][k] for n in range(k, 7)}) == 1
        assert table[k][k] == pure[k]


def test_trace_zero_convolution_identity():
    """Reference trace-zero rows times 1/(1-t)^2 give the full series, n <= 5, degree <= 12."""
    D = 12
    for n in range(1, 6):
        full = symchar.single_graded(symchar.formanek_pure(n, D)[1])
        zero = paperdata.series_list(f"pure_tracezero_series_n{n}")[: D + 1]
        conv = [sum(zero[i] * (d - i + 1) for i in range(d + 1)) for d in range(D + 1)]
        assert conv == full
