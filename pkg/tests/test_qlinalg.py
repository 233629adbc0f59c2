from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lichnerowicz.qlinalg import (DimensionMismatch, QMatrix, Subspace, apply, image, is_direct_sum,
                                  nullspace, rank, rref_rows)

entries = st.sampled_from([0, 0, 0, 1, -1, 2, 3, Fraction(1, 2), Fraction(-5, 3)])


@st.composite
def dense(draw, max_rows=6, max_cols=7):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [draw(st.lists(entries, min_size=c, max_size=c)) for _ in range(r)]


@st.composite
def subspaces(draw, ambient):
    vs = draw(st.lists(st.lists(entries, min_size=ambient, max_size=ambient), max_size=4))
    return Subspace(ambient, [{j: x for j, x in enumerate(v) if x} for v in vs])


def _sym(data):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in row] for row in data])


def _rows(data):
    return [{j: Fraction(x) for j, x in enumerate(r) if x} for r in data]


@given(dense())
def test_rank_matches_sympy(data):
    assert rank(QMatrix.from_dense(data)) == _sym(data).rank()


@given(dense())
def test_nullspace_is_kernel(data):
    m = QMatrix.from_dense(data)
    ker = nullspace(m)
    assert ker.dim == m.cols - rank(m)
    for v in ker.basis:
        assert not m.matvec(v)


@given(dense())
def test_rref_matches_sympy(data):
    ours = rref_rows(_rows(data))
    ref, pivots = _sym(data).rref()
    expect = []
    for i in range(len(pivots)):
        expect.append({j: Fraction(int(x.p), int(x.q)) for j, x in enumerate(ref.row(i)) if x != 0})
    assert [dict(r) for r in ours] == expect


def test_block_splitting_example():
    # two disconnected blocks: {x0, x1} and {x2, x3}
    m = QMatrix.from_dense([[1, 1, 0, 0], [0, 0, 1, -1], [2, 2, 0, 0]])
    ker = nullspace(m)
    assert ker.dim == 2
    assert ker.contains_vector({0: 1, 1: -1}) and ker.contains_vector({2: 1, 3: 1})


def test_untouched_columns_are_free():
    m = QMatrix(2, 3, {(0, 0): 1})
    assert nullspace(m) == Subspace(3, [{1: 1}, {2: 1}])


@given(dense(max_cols=5))
def test_span_independent_of_generators(data):
    a = Subspace(len(data[0]), _rows(data))
    shuffled = list(reversed(_rows(data))) + [{j: 2 * x for j, x in r.items()} for r in _rows(data)]
    assert a == Subspace(len(data[0]), shuffled)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_grassmann_formula(pair):
    a, b = pair
    s, i = a + b, a & b
    assert s.dim + i.dim == a.dim + b.dim
    assert a <= s and b <= s and i <= a and i <= b


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_direct_sum(pair):
    a, b = pair
    assert is_direct_sum([a, b]) == ((a & b).dim == 0)
    assert is_direct_sum([a, b], a + b) == ((a & b).dim == 0)


def test_coordinates_and_membership():
    s = Subspace(3, [{0: 1, 1: 1}, {2: 1}])
    assert s.coordinates({0: 2, 1: 2, 2: 5}) == [2, 5]
    with pytest.raises(ValueError):
        s.coordinates({0: 1})


def test_mismatch_errors():
    with pytest.raises(DimensionMismatch):
        Subspace.full(2) + Subspace.full(3)
    with pytest.raises(DimensionMismatch):
        apply(QMatrix.identity(2), Subspace.full(3))
    with pytest.raises(IndexError):
        QMatrix(1, 1, {(0, 1): 1})


@given(dense())
def test_image_and_apply(data):
    m = QMatrix.from_dense(data)
    assert image(m).dim == rank(m)
    assert apply(m, Subspace.full(m.cols)) == image(m)
    assert apply(m, nullspace(m)).dim == 0


def test_matrix_products():
    a = QMatrix.from_dense([[1, 2], [3, 4]])
    assert (a @ QMatrix.identity(2)) == a
    assert a.transpose().to_dense() == [[1, 3], [2, 4]]
    assert QMatrix.vstack([a, a]).rows == 4
