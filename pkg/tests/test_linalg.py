from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aps_homology.aps_complex import ApsComplex
from aps_homology.errors import InconsistentComplex
from aps_homology.linalg import (BitMatrix, SparseIntegerMatrix, homology, rank_mod2, smith_normal_form)


def rank_q(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def det(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


def make_complex(ring, dims, mats):
    diffs = [SparseIntegerMatrix.from_dense(m) if m else SparseIntegerMatrix(dims[i + 1], dims[i], {})
             for i, m in enumerate(mats)]
    if ring == "F2":
        diffs = [m.mod2() for m in diffs]
    grades = [[(0, 0)] * n for n in dims]
    return ApsComplex(None, ring, [], dims, [[] for _ in dims], grades, diffs, 0)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_snf_known_values():
    m = SparseIntegerMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(m) == (3, [2, 6, 12])
    assert smith_normal_form(SparseIntegerMatrix.from_dense([[0, 0], [0, 0]])) == (0, [])
    assert smith_normal_form(SparseIntegerMatrix.from_dense([[2, 0], [0, 3]])) == (2, [1, 6])


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_rank_matches_rational_rank(rows):
    r, divs = smith_normal_form(SparseIntegerMatrix.from_dense(rows))
    assert r == rank_q(rows) == len(divs)
    for a, b in zip(divs, divs[1:]):
        assert b % a == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_snf_product_is_determinant(rows):
    r, divs = smith_normal_form(SparseIntegerMatrix.from_dense(rows))
    d = det(rows)
    if d == 0:
        assert r < len(rows)
    else:
        prod = 1
        for x in divs:
            prod *= x
        assert prod == abs(d)


@settings(max_examples=60, deadline=None)
@given(matrices, st.randoms())
def test_snf_independent_of_pivot_order(rows, rnd):
    m = SparseIntegerMatrix.from_dense(rows)
    order = list(range(m.cols))
    rnd.shuffle(order)
    assert smith_normal_form(m, pivot_order=order) == smith_normal_form(m)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_mod2_rank_is_rational_rank_plus_even_divisors(rows):
    m = SparseIntegerMatrix.from_dense(rows)
    r, divs = smith_normal_form(m)
    assert rank_mod2(m) == r - sum(1 for x in divs if x % 2 == 0)


def test_bit_matrix_product_and_rank():
    a = SparseIntegerMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    b = SparseIntegerMatrix.from_dense([[1, 0], [1, 1], [0, 1]])
    assert (a.mod2() @ b.mod2()).to_dense() == [[0, 1], [1, 0]]
    assert (a @ b).to_dense() == [[2, 1], [1, 2]]
    assert BitMatrix(2, 2, [0b11, 0b11]).rank() == 1


def test_homology_of_multiplication_by_two():
    c = make_complex("Z", [1, 1], [[[2]]])
    rz = homology(c)
    assert rz.betti == {0: 0, 1: 0}
    assert rz.torsion == {0: [], 1: [2]}
    assert rz.even_divisors == 1
    assert homology(c, "Q").total_rank == 0
    assert homology(c, "F2").betti == {0: 1, 1: 1}


def test_homology_rejects_bad_complex():
    c = make_complex("Z", [1, 1, 1], [[[1]], [[1]]])
    with pytest.raises(InconsistentComplex):
        homology(c)


def test_f2_complex_has_no_integer_homology():
    c = make_complex("F2", [1, 1], [[[1]]])
    with pytest.raises(ValueError):
        homology(c, "Z")


def test_report_dict_shape():
    rep = homology(make_complex("Z", [2, 1], [[[1, 1]]]))
    d = rep.as_dict()
    assert d["total_rank"] == 1 and d["euler_characteristic"] == 1
    assert rep.profile() == ((0, 1, ()),)
