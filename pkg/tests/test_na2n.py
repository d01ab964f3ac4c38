import pytest

from basis_b import basis_trees
from nkoszul.groebner import Bounds, buchberger, cell_quotient_dimension, normal_monomials
from nkoszul.na2n import (na2n_expected_gb, na2n_generators, na2n_presentation, right_comb,
                          star, tower_relation)
from nkoszul.trees import IDENTITY, OperadElement, compose, corolla


def test_presentation_shape():
    p = na2n_presentation(3)
    assert len(p.relations) == 5
    m2, m3 = p.gens
    assert (m2.arity, m2.degree) == (2, 0)
    assert (m3.arity, m3.degree) == (3, -1)
    assert len(p.relations[0]) == 2
    assert len(p.relations[1]) == 3 + 2
    assert all(len(r) == 1 for r in p.relations[2:])
    with pytest.raises(ValueError):
        na2n_presentation(2)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_mixed_relation_matches_on_elements_form(n):
    # m2(mN(-..-),-) + (-1)^(N-1) m2(-,mN(-..-)) + sum_i (-1)^(i-1+N) mN(..,m2(-,-),..)
    p = na2n_presentation(n)
    m2, mn = (corolla(g) for g in p.gens)
    on_elements = compose(m2, 1, mn) + compose(m2, 2, mn).scale((-1) ** (n - 1))
    for i in range(1, n + 1):
        on_elements = on_elements + compose(mn, i, m2).scale((-1) ** (i - 1 + n))
    assert p.relations[1] == on_elements.scale((-1) ** n)


def test_star_associativity():
    m2 = corolla(na2n_generators(3)["m2"])
    assoc = star(m2, m2)
    assert assoc == compose(m2, 1, m2) - compose(m2, 2, m2)


def test_right_comb():
    m2 = corolla(na2n_generators(3)["m2"])
    assert right_comb(m2, 0) is IDENTITY
    assert right_comb(m2, 1) is m2
    assert right_comb(m2, 3).arity == 4


def test_tower_relations():
    m2, m3 = (corolla(g) for g in na2n_generators(3))
    inner = compose(m2, 2, m3)
    assert tower_relation(3, 1, 1) == compose(m3, 1, inner) - compose(m3, 3, inner)
    assert tower_relation(3, 2, 1) == compose(m3, 2, inner) + compose(m3, 3, inner)
    for n in (3, 4):
        for k in (1, 2, 3):
            for i in range(1, n):
                assert tower_relation(n, i, k).arity == 2 * n + k - 1


def test_expected_gb_needs_arity_bound():
    with pytest.raises(ValueError):
        na2n_expected_gb(3, Bounds())
    assert len(na2n_expected_gb(3, Bounds(8))) == 5 + 2 * 3


def test_completion_n3_small():
    p = na2n_presentation(3)
    o = p.default_order()
    gb = buchberger(p.relations, o, Bounds(7))
    got = sorted(repr(g.element) for g in gb)
    assert got == sorted(repr(e) for e in na2n_expected_gb(3, Bounds(7), order=o))


def test_basis_b_literal_and_corrected():
    literal = basis_trees(3, 7, corrected=False)
    assert [len(literal[a]) for a in range(1, 8)] == [1, 1, 1, 2, 5, 11, 22]
    corrected = basis_trees(3, 7)
    assert [len(corrected[a]) for a in range(1, 8)] == [1, 1, 2, 5, 11, 22, 43]


def test_arity_three_dimension_by_linear_algebra():
    # mu3, m2 o1 m2, m2 o2 m2 modulo the single associativity relation
    p = na2n_presentation(3)
    o = p.default_order()
    dims = [cell_quotient_dimension(p.relations, p.gens, 3, w, o) for w in range(0, 3)]
    assert sum(dims) == 2


def test_corrected_basis_equals_normal_monomials():
    p = na2n_presentation(3)
    o = p.default_order()
    gb = buchberger(p.relations, o, Bounds(7))
    ref = basis_trees(3, 7)
    for a in range(1, 8):
        assert set(normal_monomials(gb, a, a, p.gens)) == set(ref[a])


def test_monomial_relations_are_normalized():
    p = na2n_presentation(4)
    m4 = corolla(p.gens["m4"])
    for i in range(1, 5):
        (t, c), = p.relations[1 + i].terms.items()
        assert c == 1 and compose(m4, i, m4) == OperadElement.monomial(t, c).scale(c)
