"""The operad NA_{2,N}: presentation and the expected reduced Gröbner basis."""
from __future__ import annotations

from .groebner import Bounds, make_monic
from .linalg import QQ, Field
from .operad_algebra import OperadPresentation
from .ordering import PathLexOrder
from .trees import (IDENTITY, Generator, GeneratorSet, OperadElement, Tree, compose, corolla,
                    partial_compose)


def star(f: OperadElement | Tree, g: OperadElement | Tree, field: Field = QQ) -> OperadElement:
    """Pre-Lie product: sum_i (-1)^(q(k-1) + (l-1)(i-1)) f o_i g."""
    if isinstance(f, Tree):
        f = OperadElement.monomial(f, 1, field)
    if isinstance(g, Tree):
        g = OperadElement.monomial(g, 1, field)
    (q,) = g.degrees() or {0}
    k, l = f.arity, g.arity
    out = OperadElement({}, f.field, k + l - 1)
    for i in range(1, k + 1):
        term = compose(f, i, g)
        if (q * (k - 1) + (l - 1) * (i - 1)) & 1:
            out = out - term
        else:
            out = out + term
    return out


def na2n_generators(n: int) -> GeneratorSet:
    if n < 3:
        raise ValueError("NA_{2,N} needs N >= 3")
    return GeneratorSet([Generator("m2", 2, 0), Generator(f"m{n}", n, 2 - n)])


def na2n_presentation(n: int, field: Field = QQ) -> OperadPresentation:
    """Generators m2 (arity 2, degree 0), mN (arity N, degree 2-N) and the relations
    m2*m2, m2*mN + mN*m2 and mN o_i mN for i = 1..N."""
    gens = na2n_generators(n)
    m2, mn = (corolla(g) for g in gens)
    rels = [star(m2, m2, field), star(m2, mn, field) + star(mn, m2, field)]
    for i in range(1, n + 1):
        rels.append(compose(mn, i, mn, field))
    return OperadPresentation(gens, rels, field)


def right_comb(m2: Tree, k: int) -> Tree:
    """mu2^(0) = id, mu2^(k+1) = mu2(id, mu2^(k))."""
    t = IDENTITY
    for _ in range(k):
        _, t = partial_compose(m2, 2, t)
    return t


def tower_relation(n: int, i: int, k: int, field: Field = QQ) -> OperadElement:
    """R_{i,k} = mN o_i (mu2^(k) o_{k+1} mN) - (-1)^(N(i-1)) (mN o_N (m2 o_2 mN)) o_i mu2^(k-1)."""
    gens = na2n_generators(n)
    m2, mn = (corolla(g) for g in gens)
    lhs = compose(mn, i, compose(right_comb(m2, k), k + 1, mn, field), field)
    inner = compose(mn, n, compose(m2, 2, mn, field), field)
    rhs = compose(inner, i, right_comb(m2, k - 1), field)
    if (n * (i - 1)) & 1:
        return lhs + rhs
    return lhs - rhs


def na2n_expected_gb(n: int, bounds: Bounds, field: Field = QQ,
                     order: PathLexOrder | None = None) -> list[OperadElement]:
    """Defining relations plus the tower relations R_{i,k} that fit the bounds, monic."""
    if bounds.max_arity is None:
        raise ValueError("the tower is infinite; an arity bound is required")
    pres = na2n_presentation(n, field)
    o = order or pres.default_order()
    out = [make_monic(r, o) for r in pres.relations if r.arity <= bounds.max_arity]
    k = 1
    while 2 * n + k - 1 <= bounds.max_arity:
        for i in range(1, n):
            out.append(make_monic(tower_relation(n, i, k, field), o))
        k += 1
    return out
