"""Trace words on generic matrices: evaluation, graded dimensions, generating sets, unitary similarity."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from flint import nmod_mat

RANK_PRIME = 536870909  # 2**29 - 3: products of n <= 5 terms stay inside int64
SAMPLE_RANGE = 50
DEFAULT_MARGIN = 10
MAX_COLUMNS = 200_000


class RankDisagreement(RuntimeError):
    """Two sample sets produced different ranks; the sampling was insufficient."""


class BudgetExceeded(RuntimeError):
    """A requested computation exceeds the configured size guard."""


# ---------------------------------------------------------------- words

def least_rotation(w: str) -> str:
    return min(w[i:] + w[:i] for i in range(len(w))) if w else w


def expand_word(text: str) -> str:
    """Expand compact notation such as ``x^4(y^2x^2)^2y`` into a plain letter string."""
    src = text.replace(" ", "").replace("{", "").replace("}", "")
    pos = 0

    def power() -> int:
        nonlocal pos
        if pos < len(src) and src[pos] == "^":
            m = re.match(r"\^(\d+)", src[pos:])
            if not m:
                raise ValueError(f"bad exponent in {text!r}")
            pos += len(m.group(0))
            return int(m.group(1))
        return 1

    def sequence() -> str:
        nonlocal pos
        out = []
        while pos < len(src) and src[pos] != ")":
            ch = src[pos]
            if ch in "xy":
                pos += 1
                out.append(ch * power())
            elif ch == "(":
                pos += 1
                inner = sequence()
                if pos >= len(src) or src[pos] != ")":
                    raise ValueError(f"unbalanced parentheses in {text!r}")
                pos += 1
                out.append(inner * power())
            else:
                raise ValueError(f"unexpected {ch!r} in {text!r}")
        return "".join(out)

    word = sequence()
    if pos != len(src) or not word:
        raise ValueError(f"cannot parse word {text!r}")
    return word


def compact(word: str) -> str:
    """Run-length notation: ``xxxyy`` becomes ``x^3y^2``."""
    parts = []
    for m in re.finditer(r"x+|y+", word):
        run = m.group(0)
        parts.append(run[0] if len(run) == 1 else f"{run[0]}^{len(run)}")
    return "".join(parts)


@dataclass(frozen=True, order=True)
class TraceWord:
    """Trace of a word in x, y; stored as its least cyclic rotation."""
    letters: str

    def __post_init__(self) -> None:
        if not self.letters or set(self.letters) - {"x", "y"}:
            raise ValueError(f"invalid word {self.letters!r}")
        object.__setattr__(self, "letters", least_rotation(self.letters))

    @classmethod
    def parse(cls, text: str) -> "TraceWord":
        return cls(expand_word(text))

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.letters.count("x"), self.letters.count("y")

    @property
    def degree(self) -> int:
        return len(self.letters)

    def swapped(self) -> "TraceWord":
        return TraceWord(self.letters.translate(str.maketrans("xy", "yx")))

    def __str__(self) -> str:
        return compact(self.letters)


@dataclass(frozen=True)
class TraceCombination:
    """Integer combination of trace words of one bidegree."""
    terms: tuple[tuple[int, TraceWord], ...]

    def __post_init__(self) -> None:
        merged: dict[TraceWord, int] = {}
        for c, w in self.terms:
            merged[w] = merged.get(w, 0) + c
        terms = tuple(sorted(((c, w) for w, c in merged.items() if c), key=lambda t: t[1]))
        if not terms:
            raise ValueError("zero combination")
        if len({w.bidegree for _, w in terms}) != 1:
            raise ValueError("combination is not bihomogeneous")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text: str) -> "TraceCombination":
        terms = []
        for sign, coef, word in re.findall(r"([+-]?)\s*(\d*)\s*([xy()^\d{}]+)", text.replace(" ", "")):
            c = int(coef) if coef else 1
            terms.append((-c if sign == "-" else c, TraceWord.parse(word)))
        return cls(tuple(terms))

    @classmethod
    def of(cls, word: TraceWord) -> "TraceCombination":
        return cls(((1, word),))

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.terms[0][1].bidegree

    @property
    def degree(self) -> int:
        return sum(self.bidegree)

    def words(self) -> list[TraceWord]:
        return [w for _, w in self.terms]

    def swapped(self) -> "TraceCombination":
        return TraceCombination(tuple((c, w.swapped()) for c, w in self.terms))

    def __str__(self) -> str:
        out = ""
        for c, w in self.terms:
            sign = "-" if c < 0 else ("+" if out else "")
            mag = "" if abs(c) == 1 else str(abs(c))
            out += f"{sign}{mag}tr({w})"
        return out


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    elements: tuple[TraceCombination, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def degrees(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.elements:
            out[e.degree] = out.get(e.degree, 0) + 1
        return dict(sorted(out.items()))

    def words(self) -> set[TraceWord]:
        return {w for e in self.elements for w in e.words()}


def _words(spec: str) -> list[TraceWord]:
    return [TraceWord.parse(t) for t in re.split(r"[,;]", spec) if t.strip()]


# Homogeneous system of parameters for 4x4 pairs, grouped by degree.
HSOP_4 = ("x, y; x^2, xy, y^2; x^3, x^2y, xy^2, y^3; x^4, x^3y, x^2y^2, xy^3, y^4, xyxy;"
          " (x^2y)^2, (y^2x)^2")
# Words completing the system above to a minimal generating set for 4x4 pairs.
COMPLETION_4 = ("x^3y^2, y^3x^2; x^2y^2xy, y^2x^2yx; x^3y^2xy, y^3x^2yx;"
                " x^3y^2x^2y, y^3x^2y^2x, x^3y^3xy, y^3x^3yx;"
                " x^3yx^2yxy, x^2y^2xyx^2y, y^2x^2yxy^2x, y^3xy^2xyx; x^3y^3x^2y^2")
# Alternative words that may replace four of the completion words.
COMPLETION_4_ALTERNATES = {"y^3x^2yx": "xyx^2y^3", "y^3x^2y^2x": "xy^2x^2y^3",
                           "y^2x^2yxy^2x": "xy^2xyx^2y^2", "y^3xy^2xyx": "xyxy^2xy^3"}
# Words whose traces on (a, a*) decide unitary similarity of 4x4 complex matrices.
UNITARY_TEST_4 = ("x; x^2, xy; x^3, x^2y; x^4, x^3y, x^2y^2, xyxy; x^3y^2; (x^2y)^2, x^2y^2xy,"
                  " y^2x^2yx; x^3y^2xy; x^3y^2x^2y, x^3y^3xy, y^3x^3yx; x^3yx^2yxy, x^2y^2xyx^2y;"
                  " x^3y^3x^2y^2")
# Trace-zero 5x5 generators: symmetric words, skew combinations, and asymmetric words
# (the latter also enter with x and y swapped).
SYMMETRIC_5 = "xy, x^2y^2, xyxy, x^3y^3, x^4y^4"
SKEW_5 = ("x^3y^3x^2y^2-y^3x^3y^2x^2", "x^2yxy^2xyxy-y^2xyx^2yxyx",
          "x^3y^2xyxy^2xy-y^3x^2yxyx^2yx", "x^4y^4x^3y^3-y^4x^4y^3x^3")
ASYMMETRIC_5 = (
    "x^2; x^3, x^2y; x^4, x^3y; x^5, x^4y, x^3y^2, x^2yxy; x^4y^2, (x^2y)^2, x^2y^2xy;"
    " x^4y^3, x^4yxy, x^3y^2xy, x^3yxy^2;"
    " x^4y^2xy, x^4yx^2y, x^4yxy^2, x^3y^3xy, x^3y^2x^2y, x^2y^2xyxy;"
    " x^4y^2x^2y, x^4y^2xy^2, x^4yx^2y^2, x^3y^3x^2y, x^3y^2xyxy, x^3yxyx^2y, x^3yxyxy^2,"
    " x^2y^2xyx^2y;"
    " x^4y^4xy, x^4y^3xy^2, x^4y^2x^3y, x^4y^2x^2y^2, x^4y^2xyxy, x^4yx^2yxy, x^4yxy^2xy,"
    " x^3y^3xyxy, x^3y^2x^2yxy, x^3yx^2yxy^2;"
    " x^4y^4x^2y, x^4y^4xy^2, x^4y^3x^3y, x^4y^3x^2y^2, x^4y^3xyxy, x^4y^2x^2yxy, x^4y^2xyxy^2,"
    " x^4yx^3yxy, x^4yx^2y^2xy, x^4yx^2yxy^2, x^3y^2x^2y^2xy, x^3yxyxy^2xy;"
    " x^4y^4x^3y, x^4y^4x^2y^2, x^4y^3x^3y^2, x^4y^3x^2yxy, x^4y^3xy^2xy, x^4y^2x^3yxy,"
    " x^4y^2x^2yx^2y, x^4y^2xy^2x^2y, x^4y^2xyx^2y^2, x^4yx^3yx^2y, x^4yx^3yxy^2,"
    " x^4yxyxy^2xy, x^3y^3x^2yxy^2;"
    " x^4y^4x^3y^2, x^4y^4x^2yxy, x^4y^4xy^2xy, x^4y^3x^3yxy, x^4y^3x^2y^2xy, x^4y^3(x^2y)^2,"
    " x^4y^2x^3yx^2y, x^4(y^2x^2)^2y, x^4y^2xyxy^2xy;"
    " x^4y^4x^3yxy, x^4y^4x^2y^2xy, x^4y^3x^3y^2xy, x^4y^3x^2yx^3y;"
    " x^4y^4x^3y^2xy, x^4y^3x^3y^2x^2y, x^4y^2x^3yx^2yxy")


def _from_words(name: str, words: Iterable[TraceWord]) -> GeneratorSet:
    return GeneratorSet(name, tuple(TraceCombination.of(w) for w in words))


def generator_set(name: str) -> GeneratorSet:
    """Named generator sets: ``ter1`` (17), ``gen1`` (32), ``gen1_alt`` (32), ``p171`` (171)."""
    if name == "ter1":
        return _from_words(name, _words(HSOP_4))
    if name in ("gen1", "gen1_alt"):
        extra = COMPLETION_4
        if name == "gen1_alt":
            parts = [t.strip() for t in re.split(r"[,;]", extra)]
            extra = ", ".join(COMPLETION_4_ALTERNATES.get(p, p) for p in parts)
        return _from_words(name, _words(HSOP_4) + _words(extra))
    if name == "p171":
        asym = _words(ASYMMETRIC_5)
        elems = [TraceCombination.of(w) for w in _words(SYMMETRIC_5)]
        elems += [TraceCombination.parse(s) for s in SKEW_5]
        elems += [TraceCombination.of(w) for w in asym]
        elems += [TraceCombination.of(w.swapped()) for w in asym]
        return GeneratorSet(name, tuple(elems))
    raise KeyError(f"unknown generator set {name!r}; expected ter1, gen1, gen1_alt or p171")


def unitary_test_words() -> list[TraceWord]:
    return _words(UNITARY_TEST_4)


def necklaces(length: int) -> list[str]:
    """Binary words over x, y of the given length that equal their least rotation."""
    out = []
    for bits in range(1 << length):
        w = "".join("y" if bits >> (length - 1 - i) & 1 else "x" for i in range(length))
        if least_rotation(w) == w:
            out.append(w)
    return out


# ---------------------------------------------------------------- exact evaluation

Matrix = tuple[tuple[Fraction, ...], ...]


def _as_matrix(m) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in m)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class SamplePoint:
    n: int
    X: Matrix
    Y: Matrix
    trace_zero: bool = False

    def __post_init__(self) -> None:
        X, Y = _as_matrix(self.X), _as_matrix(self.Y)
        if self.trace_zero:
            X, Y = _project_trace_zero(X), _project_trace_zero(Y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, trace_zero: bool = False) -> "SamplePoint":
        X = rng.integers(-SAMPLE_RANGE, SAMPLE_RANGE + 1, size=(n, n)).tolist()
        Y = rng.integers(-SAMPLE_RANGE, SAMPLE_RANGE + 1, size=(n, n)).tolist()
        return cls(n, X, Y, trace_zero)


def _project_trace_zero(m: Matrix) -> Matrix:
    n = len(m)
    shift = sum(m[i][i] for i in range(n)) / n
    return tuple(tuple(m[i][j] - (shift if i == j else 0) for j in range(n)) for i in range(n))


def eval_trace(w: TraceWord | TraceCombination | str, p: SamplePoint) -> Fraction:
    """Exact trace of a word (or integer combination of words) at a sample point."""
    if isinstance(w, str):
        w = TraceWord.parse(w)
    if isinstance(w, TraceCombination):
        return sum((c * eval_trace(word, p) for c, word in w.terms), Fraction(0))
    letters = {"x": p.X, "y": p.Y}
    acc = letters[w.letters[0]]
    for ch in w.letters[1:]:
        acc = _matmul(acc, letters[ch])
    return sum((acc[i][i] for i in range(p.n)), Fraction(0))


def exact_rank(rows: Sequence[Sequence[Fraction | int]]) -> int:
    """Fraction-free (Bareiss) rank over the rationals."""
    if not rows:
        return 0
    dens = [v.denominator if isinstance(v, Fraction) else 1 for row in rows for v in row]
    scale = int(np.lcm.reduce(np.array(dens, dtype=object))) if dens else 1
    m = [[int(Fraction(v) * scale) for v in row] for row in rows]
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


# ---------------------------------------------------------------- modular engine

def _random_pairs(n: int, count: int, seed: int, trace_zero: bool) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    X = rng.integers(-SAMPLE_RANGE, SAMPLE_RANGE + 1, size=(count, n, n)).astype(np.int64)
    Y = rng.integers(-SAMPLE_RANGE, SAMPLE_RANGE + 1, size=(count, n, n)).astype(np.int64)
    if trace_zero:
        # n*X - tr(X)*I stays integral; the scale factor does not change ranks of bihomogeneous columns
        eye = np.eye(n, dtype=np.int64)
        X = n * X - np.trace(X, axis1=1, axis2=2)[:, None, None] * eye
        Y = n * Y - np.trace(Y, axis1=1, axis2=2)[:, None, None] * eye
    return X % RANK_PRIME, Y % RANK_PRIME


def _mulmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.matmul(a, b) % RANK_PRIME


def word_traces_mod(words: Iterable[str], X: np.ndarray, Y: np.ndarray) -> dict[str, np.ndarray]:
    """Traces mod the rank prime of each word at every sample, sharing prefix products."""
    wanted = sorted(set(words))
    out: dict[str, np.ndarray] = {}
    prefixes = {w[:i] for w in wanted for i in range(1, len(w) + 1)}
    base = {"x": X, "y": Y}
    stack = [(ch, base[ch]) for ch in "yx" if ch in prefixes]
    wanted_set = set(wanted)
    while stack:
        pre, prod = stack.pop()
        if pre in wanted_set:
            out[pre] = np.trace(prod, axis1=1, axis2=2) % RANK_PRIME
        for ch in "yx":
            nxt = pre + ch
            if nxt in prefixes:
                stack.append((nxt, _mulmod(prod, base[ch])))
    return out


def _element_values(elements: Sequence[TraceCombination], X, Y) -> list[np.ndarray]:
    traces = word_traces_mod((w.letters for e in elements for w in e.words()), X, Y)
    vals = []
    for e in elements:
        acc = np.zeros(X.shape[0], dtype=np.int64)
        for c, w in e.terms:
            acc = (acc + (c % RANK_PRIME) * traces[w.letters]) % RANK_PRIME
        vals.append(acc)
    return vals


def _monomial_columns(bidegrees: Sequence[tuple[int, int]], values: Sequence[np.ndarray],
                      degree: int, limit: int | None = None) -> dict[tuple[int, int], list[np.ndarray]]:
    """Products of elements (multisets) of total degree `degree`, bucketed by bidegree."""
    limit = MAX_COLUMNS if limit is None else limit
    order = sorted(range(len(bidegrees)), key=lambda i: sum(bidegrees[i]))
    degs = [sum(bidegrees[i]) for i in order]
    out: dict[tuple[int, int], list[np.ndarray]] = {}
    count = 0
    ones = np.ones_like(values[0]) if values else None

    def rec(start: int, remaining: int, a: int, vec: np.ndarray) -> None:
        nonlocal count
        if remaining == 0:
            out.setdefault((a, degree - a), []).append(vec)
            count += 1
            if count > limit:
                raise BudgetExceeded(f"more than {limit} product columns in degree {degree}")
            return
        for j in range(start, len(order)):
            if degs[j] > remaining:
                break
            i = order[j]
            rec(j, remaining - degs[j], a + bidegrees[i][0], vec * values[i] % RANK_PRIME)

    if values:
        rec(0, degree, 0, ones)
    return out


def _rank_mod(columns: Sequence[np.ndarray], rows: int) -> int:
    if not columns or rows == 0:
        return 0
    mat = np.stack([c[:rows] for c in columns], axis=1)
    return nmod_mat(mat.tolist(), RANK_PRIME).rank()


@dataclass(frozen=True)
class DimensionReport:
    degree: int
    by_bidegree: Mapping[tuple[int, int], int]
    columns: Mapping[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.by_bidegree.values())


FULL = "full"


def _full_elements(degree: int, trace_zero: bool) -> list[TraceCombination]:
    out = []
    for k in range(1, degree + 1):
        if trace_zero and k == 1:
            continue
        out += [TraceCombination.of(TraceWord(w)) for w in necklaces(k)]
    return out


def graded_dimension(n: int, gens: GeneratorSet | str, degree: int, trace_zero: bool = False,
                     bound: Mapping[tuple[int, int], int] | None = None, seed: int = 0,
                     margin: int = DEFAULT_MARGIN) -> DimensionReport:
    """Dimension of the degree component spanned by products of `gens` (or all traces).

    The rank is taken over the rank prime on random integer sample points, once per seed
    in (seed, seed + 1); disagreement raises RankDisagreement. `bound` optionally caps the
    expected dimension per bidegree so fewer sample rows are needed; a rank that reaches
    the row count without covering all columns raises RankDisagreement as well.
    """
    if degree == 0:
        return DimensionReport(0, {(0, 0): 1}, {(0, 0): 1})
    elements = _full_elements(degree, trace_zero) if gens == FULL else \
        [e for e in gens.elements if e.degree <= degree]
    if not elements:
        return DimensionReport(degree, {}, {})
    bideg = [e.bidegree for e in elements]
    ranks: list[dict] = []
    cols_count: dict = {}
    for s in (seed, seed + 1):
        # Sample count from a column census on a tiny probe, then the real evaluation.
        probe_X, probe_Y = _random_pairs(n, 1, s, trace_zero)
        census = _monomial_columns(bideg, _element_values(elements, probe_X, probe_Y), degree)
        cols_count = {k: len(v) for k, v in census.items()}
        need = {k: min(c, (bound or {}).get(k, c)) + margin for k, c in cols_count.items()}
        samples = max(need.values(), default=0)
        X, Y = _random_pairs(n, samples, s + 7919, trace_zero)
        columns = _monomial_columns(bideg, _element_values(elements, X, Y), degree)
        result = {}
        for k, cols in columns.items():
            r = _rank_mod(cols, need[k])
            if r == need[k] < len(cols):
                raise RankDisagreement(f"rank saturated the {need[k]} rows at bidegree {k}")
            result[k] = r
        ranks.append(result)
    if ranks[0] != ranks[1]:
        raise RankDisagreement(f"seeds disagree in degree {degree}: {ranks[0]} vs {ranks[1]}")
    return DimensionReport(degree, dict(sorted(ranks[0].items())), dict(sorted(cols_count.items())))


def graded_dimension_exact(n: int, gens: GeneratorSet | str, degree: int, trace_zero: bool = False,
                           seed: int = 0, margin: int = DEFAULT_MARGIN) -> int:
    """Exact rational evaluation and Bareiss rank; slow, meant as an oracle for small cases."""
    if degree == 0:
        return 1
    elements = _full_elements(degree, trace_zero) if gens == FULL else \
        [e for e in gens.elements if e.degree <= degree]
    cols = _exact_monomials(elements, degree)
    rng = np.random.default_rng(seed)
    total = 0
    for k, monos in cols.items():
        points = [SamplePoint.random(n, rng, trace_zero) for _ in range(len(monos) + margin)]
        rows = []
        for p in points:
            vals = [eval_trace(e, p) for e in elements]
            rows.append([_prod(vals[i] for i in mono) for mono in monos])
        total += exact_rank(rows)
    return total


def _prod(it: Iterable[Fraction]) -> Fraction:
    out = Fraction(1)
    for v in it:
        out *= v
    return out


def _exact_monomials(elements: Sequence[TraceCombination], degree: int) -> dict:
    out: dict = {}

    def rec(start: int, remaining: int, a: int, chosen: tuple) -> None:
        if remaining == 0:
            out.setdefault((a, degree - a), []).append(chosen)
            return
        for i in range(start, len(elements)):
            d = elements[i].degree
            if d <= remaining:
                rec(i, remaining - d, a + elements[i].bidegree[0], chosen + (i,))

    rec(0, degree, 0, ())
    return out


@dataclass
class VerificationReport:
    n: int
    set_name: str
    trace_zero: bool
    rows: list[tuple[int, int, int]] = field(default_factory=list)  # (degree, subalgebra, full)

    @property
    def passed(self) -> bool:
        return all(sub == full for _, sub, full in self.rows)

    def first_deficit(self) -> tuple[int, int] | None:
        for d, sub, full in self.rows:
            if sub != full:
                return d, full - sub
        return None


def full_bigraded_dimensions(n: int, max_degree: int, trace_zero: bool = False) -> dict:
    """Bigraded dimensions of the full algebra from the character engine."""
    from .symchar import formanek_pure
    from .polyrat import TruncSeries
    _, series = formanek_pure(n, max_degree)
    if trace_zero:
        factor = TruncSeries(max_degree, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1}, series.names)
        series = series * factor
    return {m: c for m, c in series.coeffs.items() if c}


def verify_generating_set(n: int, gens: GeneratorSet, max_degree: int, trace_zero: bool = False,
                          seed: int = 0, progress=None) -> VerificationReport:
    full = full_bigraded_dimensions(n, max_degree, trace_zero)
    report = VerificationReport(n, gens.name, trace_zero)
    for d in range(1, max_degree + 1):
        bound = {(a, d - a): full.get((a, d - a), 0) for a in range(d + 1)}
        dims = graded_dimension(n, gens, d, trace_zero, bound=bound, seed=seed)
        report.rows.append((d, dims.total, sum(bound.values())))
        if progress:
            progress(report.rows[-1])
    return report


# ---------------------------------------------------------------- unitary similarity

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class SimilarityVerdict:
    similar: bool
    witness: str | None = None
    words_checked: int = 0

    def to_json(self) -> dict:
        out = {"verdict": "similar" if self.similar else "not_similar", "words_checked": self.words_checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _word_matrices(m: np.ndarray) -> dict[str, np.ndarray]:
    return {"x": m, "y": m.conj().swapaxes(-1, -2)}


def _trace_words_complex(words: Sequence[TraceWord], m: np.ndarray) -> np.ndarray:
    base = _word_matrices(m)
    vals = []
    for w in words:
        acc = base[w.letters[0]]
        for ch in w.letters[1:]:
            acc = acc @ base[ch]
        vals.append(np.trace(acc, axis1=-2, axis2=-1))
    return np.array(vals)


def _agree(va: complex, vb: complex, length: int, na: float, nb: float, n: int, tol: float) -> bool:
    scale = max(1.0, abs(va), abs(vb), n * max(na, nb) ** length)
    return abs(va - vb) <= tol * scale


def unitary_similar(a, b, tol: float = DEFAULT_TOL) -> SimilarityVerdict:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != (4, 4) or b.shape != (4, 4):
        raise ValueError("the 20-word test applies to 4x4 matrices; use exhaustive_word_test otherwise")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("matrix entries must be finite")
    words = unitary_test_words()
    va, vb = _trace_words_complex(words, a), _trace_words_complex(words, b)
    na, nb = np.linalg.norm(a, 2), np.linalg.norm(b, 2)
    for i, w in enumerate(words):
        if not _agree(va[i], vb[i], w.degree, na, nb, 4, tol):
            return SimilarityVerdict(False, str(w), i + 1)
    return SimilarityVerdict(True, None, len(words))


def exhaustive_word_test(a, b, max_length: int, tol: float = DEFAULT_TOL) -> SimilarityVerdict:
    """Compare traces of every cyclically distinct word of length <= max_length in (m, m*)."""
    verdicts = exhaustive_word_test_batch(np.asarray(a, dtype=complex)[None],
                                          np.asarray(b, dtype=complex)[None], max_length, tol)
    return verdicts[0]


def exhaustive_word_test_batch(a: np.ndarray, b: np.ndarray, max_length: int,
                               tol: float = DEFAULT_TOL) -> list[SimilarityVerdict]:
    """Batched form over stacks of pairs; a and b have shape (batch, n, n)."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected two stacks of square matrices of equal shape")
    batch, n = a.shape[0], a.shape[1]
    both = np.concatenate([a, b])
    base = _word_matrices(both)
    norms = np.linalg.norm(both, 2, axis=(1, 2))
    na, nb = norms[:batch], norms[batch:]
    witness: list[str | None] = [None] * batch
    checked = [0] * batch
    stack = [(ch, base[ch]) for ch in "yx"]
    while stack:
        word, prod = stack.pop()
        if least_rotation(word) == word:
            tr = np.trace(prod, axis1=1, axis2=2)
            va, vb = tr[:batch], tr[batch:]
            scale = np.maximum.reduce([np.ones(batch), np.abs(va), np.abs(vb),
                                       n * np.maximum(na, nb) ** len(word)])
            bad = np.abs(va - vb) > tol * scale
            for i in range(batch):
                if witness[i] is None:
                    checked[i] += 1
                    if bad[i]:
                        witness[i] = compact(word)
        if len(word) < max_length:
            for ch in "yx":
                stack.append((word + ch, prod @ base[ch]))
    return [SimilarityVerdict(witness[i] is None, witness[i], checked[i]) for i in range(batch)]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_complex(n: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
