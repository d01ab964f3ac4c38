import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkoszul.linalg import GF, QQ, ExactMatrix, rank
from nkoszul.nhomog import (GradedSpace, MultilinearMap, NHomogPresentation, add_maps,
                            check_a2n_relations, check_coalgebra_relations, check_mun_composites,
                            compose_maps, dual_degree, dual_presentation, index_word,
                            koszul_dual_algebra, koszul_dual_coalgebra, koszul_sign,
                            random_presentation, star_product, weight_basis, word_index)
from presentations import f2_witness, free_algebra, full_relations, random_presentations, x_cubed


def ideal_dim(a, m):
    """dim of the weight-m part of (R), spanned by u·r·w, by plain row reduction."""
    n, v = a.n, a.v_dim
    rows = []
    for rel in a.relation_words():
        for left in range(m - n + 1):
            for u in itertools.product(range(v), repeat=left):
                for w in itertools.product(range(v), repeat=m - n - left):
                    rows.append({word_index(u + r + w, v): c for r, c in rel.items()})
    if not rows:
        return 0
    return rank(ExactMatrix(len(rows), v ** m, rows, a.field))


def test_word_indexing():
    assert word_index((0, 1, 1), 2) == 3
    assert index_word(3, 2, 3) == (0, 1, 1)
    for k in range(27):
        assert word_index(index_word(k, 3, 3), 3) == k


def test_presentation_validation():
    with pytest.raises(ValueError):
        NHomogPresentation(1, 2)
    with pytest.raises(ValueError):
        NHomogPresentation(3, 0)
    with pytest.raises(ValueError):
        NHomogPresentation(3, 2, ExactMatrix(1, 4, [{0: 1}]))
    with pytest.raises(ValueError):
        NHomogPresentation.from_words(3, 2, [{(0, 1): 1}])
    a = NHomogPresentation.from_words(3, 2, [{(0, 0, 0): 2}, {(0, 0, 0): 1, (1, 1, 1): 1}])
    assert a.dim_r == 2 and a.relations.rows == [{0: 1}, {7: 1}]
    assert repr(a) == "NHomogPresentation(N=3, dim V=2, dim R=2, q)"


def test_dual_examples():
    assert dual_presentation(x_cubed()).dim_r == 0
    assert dual_presentation(free_algebra()).dim_r == 8
    xxx = NHomogPresentation.from_words(3, 2, [{(0, 0, 0): 1}])
    d = dual_presentation(xxx)
    assert d.dim_r == 7 and d.names == ("x*", "y*")
    assert dual_presentation(d).names == ("x", "y")


@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.sampled_from([QQ, GF(2), GF(3)]))
def test_dual_involution(seed, v, fld):
    rng = random.Random(seed)
    dim_r = rng.randint(0, min(8, v ** 3))
    a = random_presentation(rng, 3, v, dim_r, fld)
    dd = dual_presentation(dual_presentation(a))
    assert dd.same_relations(a)
    assert dd.names == a.names


def test_weight_basis_examples():
    a = x_cubed()
    assert [len(weight_basis(a, m)) for m in range(5)] == [1, 1, 1, 0, 0]
    full = full_relations()
    assert [len(weight_basis(full, m)) for m in range(6)] == [1, 2, 4, 0, 0, 0]
    r = random_presentations(1, 3)[0]
    for m in range(3):
        assert len(weight_basis(r, m)) == 2 ** m


@pytest.mark.parametrize("a", random_presentations(6, 11, (2, 3)) + [f2_witness()],
                         ids=repr)
def test_quotient_dims_against_row_reduction(a):
    q = a.quotient()
    top = 6 if a.v_dim == 2 else 5
    for m in range(top + 1):
        assert q.dim(m) == a.v_dim ** m - ideal_dim(a, m)
        # basis words are prefix-closed
        idx = set(weight_basis(a, m - 1)) if m else set()
        for w in weight_basis(a, m):
            assert not m or w[:-1] in idx
    d = dual_presentation(a)
    for m in range(top + 1):
        assert d.quotient().dim(m) == a.v_dim ** m - ideal_dim(d, m)


def test_multiply_is_associative():
    a = random_presentations(1, 5, (3,), (4,))[0]
    q = a.quotient()
    rng = random.Random(0)
    for _ in range(30):
        ws = [rng.randint(1, 3) for _ in range(3)]
        xs = [{rng.randrange(q.dim(w)): 1} if q.dim(w) else {} for w in ws]
        ab = q.multiply(q.multiply(xs[0], ws[0], xs[1], ws[1]), ws[0] + ws[1], xs[2], ws[2])
        bc = q.multiply(xs[0], ws[0], q.multiply(xs[1], ws[1], xs[2], ws[2]), ws[1] + ws[2])
        assert ab == bc


def test_dual_algebra_of_truncated_polynomials():
    for n in (3, 4):
        e = koszul_dual_algebra(x_cubed(n), 9)
        assert e.weights == [m for m in range(1, 10) if m % n in (0, 1)]
        assert all(e.dim(m) == 1 for m in e.weights)
        assert [e.degree(m) for m in e.weights][:4] == [1, 2, 3, 4]


def test_dual_algebra_products_land_where_expected():
    a = random_presentations(1, 8)[0]
    e = koszul_dual_algebra(a, 7)
    sp = e.space
    for xs, v in e.mun.table.items():
        assert all(sp.weight[x] == 1 for x in xs) or sum(sp.weight[x] for x in xs) > 3
        assert {sp.weight[k] for k in v} == {sum(sp.weight[x] for x in xs)}
    for (x, y) in e.mu2.table:
        assert not (sp.weight[x] == 1 and sp.weight[y] == 1)
    assert e.dim(3) == dual_presentation(a).quotient().dim(3)
    assert e.dim(2) == 0


def test_dual_degree():
    assert [dual_degree(3, m) for m in (1, 3, 4, 6, 7)] == [1, 2, 3, 4, 5]
    with pytest.raises(ValueError):
        dual_degree(3, 2)


# multilinear maps ---------------------------------------------------------------

def two_point_space():
    return GradedSpace([(0, 2, 0)])


def idempotents(sp, broken=False):
    """K x K with e_i e_i = e_i; optionally one constant changed."""
    table = {(0, 0): {0: 1}, (1, 1): {1: 1}}
    if broken:
        table[(0, 1)] = {0: 1}
    return MultilinearMap(sp, 2, 0, table)


def test_star_of_associative_product():
    sp = two_point_space()
    mu = idempotents(sp)
    assert star_product(mu, mu).is_zero()
    bad = idempotents(sp, broken=True)
    s = star_product(bad, bad)
    want = {}
    for k, v in compose_maps(bad, 1, bad).items():
        want[k] = dict(v)
    for k, v in compose_maps(bad, 2, bad).items():
        acc = want.setdefault(k, {})
        for j, c in v.items():
            acc[j] = acc.get(j, 0) - c
    assert s.table == {k: {j: c for j, c in v.items() if c} for k, v in want.items()
                       if any(v.values())}
    assert not s.is_zero()


def test_star_with_identity():
    sp = GradedSpace([(1, 2, 1), (2, 1, 0)])
    f = MultilinearMap(sp, 3, -1, {(0, 1, 2): {2: 1}, (1, 1, 0): {0: -2}})
    ident = MultilinearMap(sp, 1, 0, {(k,): {k: 1} for k in range(len(sp))})
    s = star_product(f, ident)
    assert s.table == {k: {j: 3 * c for j, c in v.items()} for k, v in f.table.items()}


def test_star_space_mismatch():
    f = idempotents(two_point_space())
    g = idempotents(two_point_space())
    with pytest.raises(ValueError):
        star_product(f, g)
    with pytest.raises(ValueError):
        add_maps(f, g)


@pytest.mark.parametrize("a", [x_cubed(), full_relations(), free_algebra()]
                         + random_presentations(8, 21, (2, 3)), ids=repr)
def test_dual_algebra_is_a2n(a):
    e = koszul_dual_algebra(a, 7 if a.v_dim == 3 else 9)
    assert check_a2n_relations(e.mu2, e.mun)
    assert check_mun_composites(e.mun)


def test_corrupted_mu2_is_caught():
    e = koszul_dual_algebra(full_relations(), 7)
    table = {k: dict(v) for k, v in e.mu2.table.items()}
    key = sorted(table)[0]
    j = sorted(table[key])[0]
    table[key][j] = -table[key][j]
    bad = MultilinearMap(e.space, 2, 0, table)
    res = check_a2n_relations(bad, e.mun)
    assert not res and res.witness[0] in ("m2*m2", "m2*mN+mN*m2")


def test_a2n_degree_checks():
    e = koszul_dual_algebra(x_cubed(), 6)
    with pytest.raises(ValueError):
        check_a2n_relations(e.mun, e.mu2)
    with pytest.raises(ValueError):
        check_a2n_relations(e.mu2, MultilinearMap(e.space, 3, 0, {}))


def test_koszul_sign():
    assert koszul_sign([1, 1]) == -1
    assert koszul_sign([1, 1, 1]) == -1
    assert koszul_sign([1, 2, 1]) == -1
    assert koszul_sign([2, 1, 0]) == 1


# coalgebra ---------------------------------------------------------------------------

def test_coalgebra_low_weights():
    a = random_presentations(1, 9, (2,), (3,))[0]
    c = koszul_dual_coalgebra(a, 7)
    assert c.dim(0) == 1 and c.dim(1) == 2 and c.dim(3) == a.dim_r
    assert c.dim(2) == 0
    assert sorted(c.delta2((1, 0))) == [(1, ((0, 0), (1, 0))), (1, ((1, 0), (0, 0)))]


def test_delta_n_is_the_inclusion_of_r():
    for a in random_presentations(5, 4, (2, 3)):
        c = koszul_dual_coalgebra(a, 3)
        rows = []
        for x in c.basis(3):
            row = {}
            for coef, parts in c.deltan(x):
                assert all(w == 1 for w, _ in parts)
                k = word_index(tuple(i for _, i in parts), a.v_dim)
                row[k] = row.get(k, 0) + coef
            rows.append(row)
        m = ExactMatrix(len(rows), a.v_dim ** 3, rows, a.field)
        assert rank(m) == a.dim_r
        stacked = ExactMatrix(len(rows) + a.dim_r, a.v_dim ** 3, rows + a.relations.rows,
                              a.field)
        assert rank(stacked) == a.dim_r


@pytest.mark.parametrize("twisted", [True, False])
def test_coalgebra_relations(twisted):
    for a in random_presentations(20, 33, (2, 3)):
        c = koszul_dual_coalgebra(a, 7 if a.v_dim == 3 else 9, twisted)
        assert check_coalgebra_relations(c)
