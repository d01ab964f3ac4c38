import itertools

import pytest

from nkoszul.groebner import Bounds, buchberger, cell_quotient_dimension, normal_monomials
from nkoszul.linalg import QQ
from nkoszul.na2n import na2n_presentation
from nkoszul.operad_algebra import (AlgebraPresentation, OperadPresentation, algebra_groebner,
                                    algebra_normal_basis, algebra_order, extended_generators,
                                    extension_of_constants)
from nkoszul.trees import Generator, GeneratorSet, OperadElement, Tree, corolla, partial_compose

MU = Generator("mu", 2, 0)
mu = corolla(MU)
LEFT = partial_compose(mu, 1, mu)[1]
RIGHT = partial_compose(mu, 2, mu)[1]
ASSOC_OP = OperadPresentation(GeneratorSet([MU]), [OperadElement({LEFT: 1, RIGHT: -1})])


def const(name, weight=1, degree=0):
    return Generator(name, 0, degree, weight, True)


def product(p, a, b, name="mu"):
    """The arity-0 tree name(a, b) over the extended alphabet of p."""
    op = p.gens[name]._replace(weight=0)
    return Tree(op, (a, b))


def leaf(c):
    return Tree(c, ())


def assoc_algebra(names, relations):
    cs = [const(n) for n in names]
    rels = [r(cs) for r in relations]
    return AlgebraPresentation(ASSOC_OP, cs, rels)


def words_avoiding(letters, bad, m):
    return sum(1 for w in itertools.product(letters, repeat=m) if bad not in "".join(w))


def test_extension_generators_and_clash():
    a = assoc_algebra("x", [])
    ext = extension_of_constants(ASSOC_OP, a)
    assert [g.name for g in ext.gens] == ["mu", "x"]
    assert ext.gens["mu"].weight == 0
    with pytest.raises(ValueError):
        extended_generators(ASSOC_OP, [const("mu")])
    with pytest.raises(ValueError):
        AlgebraPresentation(ASSOC_OP, [Generator("y", 1, 0)])


def test_constants_rank_above_operations():
    a = assoc_algebra("xy", [])
    assert algebra_order(a).names() == ["x", "y", "mu"]


def test_free_algebra_one_constant():
    a = assoc_algebra("x", [])
    gb = algebra_groebner(a, bounds=Bounds(max_size=8))
    basis = algebra_normal_basis(a, gb, 8)
    assert {w: len(b) for w, b in basis.items()} == {w: 1 for w in range(1, 9)}
    assert [g.element for g in gb] == [g.element for g in
                                       buchberger(extension_of_constants(ASSOC_OP, a).relations,
                                                  algebra_order(a), Bounds(max_size=8))]


def test_square_zero():
    def xx(cs):
        x = leaf(cs[0])
        return OperadElement.monomial(product(ASSOC_OP, x, x))
    a = assoc_algebra("x", [xx])
    gb = algebra_groebner(a, bounds=Bounds(max_size=7))
    basis = algebra_normal_basis(a, gb, 7)
    assert {w: len(b) for w, b in basis.items()} == {1: 1, **{w: 0 for w in range(2, 8)}}


def test_monomial_relation_against_word_count():
    def xy(cs):
        x, y = leaf(cs[0]), leaf(cs[1])
        return OperadElement.monomial(product(ASSOC_OP, x, y))
    a = assoc_algebra("xy", [xy])
    gb = algebra_groebner(a, bounds=Bounds(max_size=7))
    basis = algebra_normal_basis(a, gb, 7)
    for w in range(1, 8):
        assert len(basis[w]) == words_avoiding("xy", "xy", w) == w + 1


def test_commutative_relation_against_row_reduction():
    def comm(cs):
        x, y = leaf(cs[0]), leaf(cs[1])
        return OperadElement({product(ASSOC_OP, x, y): 1, product(ASSOC_OP, y, x): -1})
    a = assoc_algebra("xy", [comm])
    o = algebra_order(a)
    gb = algebra_groebner(a, o, Bounds(max_size=6))
    basis = algebra_normal_basis(a, gb, 6)
    ext = extension_of_constants(ASSOC_OP, a)
    for w in range(1, 6):
        oracle = cell_quotient_dimension(ext.relations, ext.gens, 0, w, o)
        assert len(basis[w]) == oracle == w + 1


def test_zero_algebra():
    a = assoc_algebra("e", [lambda cs: OperadElement.monomial(leaf(cs[0]))])
    gb = algebra_groebner(a, bounds=Bounds(max_size=5))
    assert all(not b for b in algebra_normal_basis(a, gb, 5).values())


def test_bounds_required():
    a = assoc_algebra("x", [])
    with pytest.raises(ValueError):
        algebra_groebner(a)
    gb = algebra_groebner(a, bounds=Bounds(max_size=3))
    with pytest.raises(ValueError):
        algebra_normal_basis(a, gb, 5)


def cubic_ideal_algebra(k=2, n=3):
    """NA_{2,n} with constants e_i and relations mu2(e_i, e_j) = 0."""
    p = na2n_presentation(n)
    cs = [const(f"e{i}", 1, 1) for i in range(1, k + 1)]
    m2 = extended_generators(p, cs)["m2"]
    rels = [OperadElement.monomial(Tree(m2, (leaf(a), leaf(b)))) for a in cs for b in cs]
    return p, cs, AlgebraPresentation(p, cs, rels)


def test_cubic_ideal_completion():
    p, cs, a = cubic_ideal_algebra()
    gb = algebra_groebner(a, bounds=Bounds(max_size=7))
    ext = extended_generators(p, cs)
    m2 = ext["m2"]
    with_constants = {g.lt for g in gb if any(x.constant for x in g.lt.labels)}
    want = {Tree(m2, (leaf(x), leaf(y))) for x in cs for y in cs}
    want |= {Tree(m2, (leaf(x), Tree(m2, (leaf(y), None)))) for x in cs for y in cs}
    assert with_constants == want
    # the constant-free part is the completion of the operad alone
    operad_part = {g.lt for g in gb} - with_constants
    alone = buchberger(extension_of_constants(p, AlgebraPresentation(p, cs)).relations,
                       algebra_order(a), Bounds(max_size=7))
    assert operad_part == {g.lt for g in alone if not any(x.constant for x in g.lt.labels)}


def test_cubic_ideal_dims():
    p, cs, a = cubic_ideal_algebra()
    gb = algebra_groebner(a, bounds=Bounds(max_size=7))
    dims = {w: len(b) for w, b in algebra_normal_basis(a, gb, 7).items()}
    oracle = {m: (2 ** m if m % 3 in (0, 1) else 0) for m in range(1, 8)}
    assert dims == oracle


def test_extension_weight_zero_split():
    # (P ⋉ A)(0) = P(0) ⊕ A; P(0) = 0 here, so arity-0 normal trees are all algebra elements
    p, cs, a = cubic_ideal_algebra()
    gb = algebra_groebner(a, bounds=Bounds(max_size=6))
    ext = extended_generators(p, cs)
    basis = algebra_normal_basis(a, gb, 6)
    for w in range(1, 7):
        assert normal_monomials(gb, 0, w, ext) == sorted(
            [t for v in range(w + 1) for t in basis.get(v, [])], key=gb.order.key)


def test_cubic_ideal_against_row_reduction():
    p, cs, a = cubic_ideal_algebra()
    o = algebra_order(a)
    gb = algebra_groebner(a, o, Bounds(max_size=5))
    basis = algebra_normal_basis(a, gb, 5)
    ext = extension_of_constants(p, a)
    for w in range(1, 5):
        assert len(basis[w]) == cell_quotient_dimension(ext.relations, ext.gens, 0, w, o, QQ)
