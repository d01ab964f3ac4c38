import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkoszul.linalg import (GF, QQ, Echelon, ExactMatrix, StructuralError, WeightedComplex,
                            annihilator, field_from_name, homology_dims, rank, row_reduce)


def bareiss_rank(rows):
    """Fraction-free elimination over the integers."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    prev, r = 1, 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == m:
            break
    return r


def dot(u, v, fld):
    return fld.norm(sum(u.get(k, 0) * x for k, x in v.items()))


def test_fields():
    assert QQ(Fraction(2, 3)) * QQ.inv(Fraction(2, 3)) == 1
    assert QQ(Fraction(4, -6)) == Fraction(-2, 3)
    f5 = GF(5)
    assert f5.norm(7) == 2
    assert f5.norm(3 * f5.inv(3)) == 1
    assert field_from_name("f2") == GF(2)
    assert field_from_name("q") == QQ
    with pytest.raises(ValueError):
        field_from_name("f4")


def test_no_stored_zeros():
    m = ExactMatrix(2, 3, [{0: 0, 1: 2}, {2: 0}])
    assert m.rows == [{1: 2}, {}]
    assert ExactMatrix.from_dense([[0, 5], [0, 0]]).nnz() == 1
    with pytest.raises(IndexError):
        ExactMatrix(1, 2, [{3: 1}])


def test_row_reduce_identity_and_zero():
    r = row_reduce(ExactMatrix.from_dense([[1, 0], [0, 1]]))
    assert r.rank == 2 and r.kernel_basis.nrows == 0
    z = row_reduce(ExactMatrix(3, 4))
    assert z.rank == 0 and z.kernel_basis.nrows == 4


def test_rank_against_bareiss():
    rng = random.Random(7)
    for trial in range(40):
        rows = [[rng.randint(-4, 4) if rng.random() < 0.6 else 0 for _ in range(6)]
                for _ in range(6)]
        if trial % 4 == 0:
            rows[5] = [a + 2 * b for a, b in zip(rows[0], rows[1])]
        assert rank(ExactMatrix.from_dense(rows)) == bareiss_rank(rows)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=7))
def test_row_reduce_properties(rows):
    m = ExactMatrix.from_dense(rows)
    r = row_reduce(m)
    assert r.rank + r.kernel_basis.nrows == m.ncols
    for k in r.kernel_basis.rows:
        for row in m.rows:
            assert dot(row, k, QQ) == 0
    # reduced echelon: each pivot column is a unit vector in the row basis
    for p, row in zip(r.pivots, r.row_basis.rows):
        assert min(row) == p and row[p] == 1
        for other in r.row_basis.rows:
            if other is not row:
                assert p not in other


def test_gf2_rank_matches_generic_path():
    rng = random.Random(3)
    f2, f3 = GF(2), GF(3)
    for _ in range(30):
        rows = [[rng.randint(0, 1) for _ in range(9)] for _ in range(7)]
        ech = Echelon(9, f2)
        for r in rows:
            ech.add({j: v for j, v in enumerate(r) if v})
        assert rank(ExactMatrix.from_dense(rows, f2)) == ech.rank
    assert rank(ExactMatrix.from_dense([[1, 1], [1, 1]], f3)) == 1


def test_annihilator_examples():
    r = annihilator(ExactMatrix.from_dense([[1, 0]]), 2)
    assert r.to_dense() == [[0, 1]]
    assert annihilator(ExactMatrix(0, 8), 8).nrows == 8
    xxx = ExactMatrix(1, 8, [{0: 1}])
    assert annihilator(xxx, 8).nrows == 7
    with pytest.raises(ValueError):
        annihilator(xxx, 9)


@given(st.lists(st.lists(st.integers(-2, 2), min_size=6, max_size=6), max_size=6))
def test_annihilator_rank_nullity(rows):
    m = ExactMatrix(len(rows), 6, [{j: v for j, v in enumerate(r) if v} for r in rows])
    ann = annihilator(m, 6)
    assert rank(ann) + rank(m) == 6
    for a in ann.rows:
        for r in m.rows:
            assert dot(r, a, QQ) == 0


def _complex(dims, diffs):
    c = WeightedComplex(QQ)
    c.dims[0] = dict(dims)
    c.diffs[0] = {h: ExactMatrix.from_dense(d, ncols=dims[h - 1]) for h, d in diffs.items()}
    return c


def test_homology_examples():
    c = _complex({1: 1, 0: 1}, {1: [[1]]})
    assert homology_dims(c, 0) == {0: 0, 1: 0}
    z = _complex({0: 2, 1: 3, 2: 1}, {})
    assert homology_dims(z, 0) == {0: 2, 1: 3, 2: 1}


def test_homology_rejects_nonzero_square():
    c = _complex({2: 1, 1: 1, 0: 1}, {2: [[1]], 1: [[1]]})
    with pytest.raises(StructuralError):
        homology_dims(c, 0)


def test_homology_invariant_under_change_of_basis():
    # 0 -> Q^2 -> Q^3 -> Q^2 -> 0 with d1 d2 = 0
    d2 = [[1, 1, 0], [2, 2, 0]]
    d1 = [[1, 0], [-1, 0], [0, 0]]
    c = _complex({2: 2, 1: 3, 0: 2}, {2: d2, 1: d1})
    base = homology_dims(c, 0)
    chi = sum((-1) ** h * n for h, n in base.items())
    assert chi == c.euler_characteristic(0)
    rng = random.Random(11)

    def invertible(n):
        while True:
            m = ExactMatrix.from_dense([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            if rank(m) == n:
                return m

    p2, p1, p0 = invertible(2), invertible(3), invertible(2)
    # d_h -> P_h d_h P_{h-1}^{-1}, inverse read off the RREF of [P | I]
    def inverse(m):
        n = m.nrows
        aug = ExactMatrix(n, 2 * n, [{**r, n + i: 1} for i, r in enumerate(m.rows)])
        rr = row_reduce(aug)
        return ExactMatrix(n, n, [{j - n: v for j, v in r.items() if j >= n}
                                  for r in rr.row_basis.rows])

    e2 = p2 @ ExactMatrix.from_dense(d2) @ inverse(p1)
    e1 = p1 @ ExactMatrix.from_dense(d1) @ inverse(p0)
    c2 = WeightedComplex(QQ, {0: {2: 2, 1: 3, 0: 2}}, {0: {2: e2, 1: e1}})
    assert homology_dims(c2, 0) == base
