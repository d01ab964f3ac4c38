"""Operadic Gröbner bases: reduction, small common multiples, completion."""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .linalg import QQ, Echelon, Field, StructuralError
from .ordering import MonomialOrder, PathLexOrder
from .trees import (Embedding, Generator, OperadElement, Tree, _Enumerator, find_divisors,
                    match_at, substitute, substitute_monomial)


@dataclass(frozen=True)
class Bounds:
    """Truncation for completion.  ``max_size`` bounds arity + weight."""

    max_arity: int | None = None
    max_weight: int | None = None
    max_size: int | None = None

    def admits(self, t: Tree) -> bool:
        if self.max_arity is not None and t.arity > self.max_arity:
            return False
        if self.max_weight is not None and t.weight > self.max_weight:
            return False
        if self.max_size is not None and t.arity + t.weight > self.max_size:
            return False
        return True

    def as_dict(self) -> dict:
        return {"max_arity": self.max_arity, "max_weight": self.max_weight,
                "max_size": self.max_size}


@dataclass(frozen=True)
class GBElement:
    element: OperadElement
    lt: Tree
    origin: tuple = ("input",)

    @property
    def leading_monomial(self) -> Tree:
        return self.lt


@dataclass
class GroebnerBasis:
    elements: list[GBElement]
    order: MonomialOrder
    bounds: Bounds
    field: Field = QQ
    reduced: bool = False
    _reducer: object = dc_field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def complete_up_to(self) -> Bounds:
        return self.bounds

    def leading_monomials(self) -> list[Tree]:
        return [g.lt for g in self.elements]

    def reducer(self) -> "Reducer":
        if self._reducer is None or len(self._reducer.elts) != len(self.elements):
            r = Reducer(self.order, self.field)
            for g in self.elements:
                r.add(g)
            self._reducer = r
        return self._reducer


def leading_term(f: OperadElement, o: MonomialOrder) -> tuple[Tree, object]:
    if not f.terms:
        raise ValueError("the zero element has no leading term")
    t = max(f.terms, key=o.key)
    return t, f.terms[t]


def make_monic(f: OperadElement, o: MonomialOrder) -> OperadElement:
    _, c = leading_term(f, o)
    if c == 1:
        return f
    return f.scale(f.field.inv(c))


def as_gb_element(f: OperadElement, o: MonomialOrder, origin=("input",)) -> GBElement:
    f = make_monic(f, o)
    return GBElement(f, leading_term(f, o)[0], origin)


def _first_divisor(m: Tree, t: Tree) -> Embedding | None:
    if not t.labels <= m.labels or t.nverts > m.nverts:
        return None
    for path, sub in m.vertices():
        if sub.gen == t.gen and sub.nverts >= t.nverts:
            b = match_at(sub, t)
            if b is not None:
                return Embedding(path, t, b)
    return None


class Reducer:
    """Normal forms modulo a growing list of monic elements.

    Among the applicable divisors of a monomial the element with the smallest
    leading monomial is used (ties: earliest element, first embedding).
    """

    def __init__(self, order: MonomialOrder, field: Field = QQ):
        self.order = order
        self.field = field
        self.elts: list[GBElement] = []
        self._div: dict[Tree, tuple[int, int | None, Embedding | None]] = {}
        self._sub: dict[tuple, dict] = {}
        self.steps = 0

    def add(self, g: GBElement) -> int:
        if g.element.terms.get(g.lt) != 1:
            raise ValueError("elements must be monic")
        self.elts.append(g)
        return len(self.elts) - 1

    def divisor(self, m: Tree) -> tuple[int, Embedding] | None:
        n = len(self.elts)
        checked, best, emb = self._div.get(m, (0, None, None))
        if checked < n:
            key = self.order.key
            for idx in range(checked, n):
                lt = self.elts[idx].lt
                if best is not None and key(lt) >= key(self.elts[best].lt):
                    continue
                e = _first_divisor(m, lt)
                if e is not None:
                    best, emb = idx, e
            self._div[m] = (n, best, emb)
        if best is None:
            return None
        return best, emb

    def _rewrite(self, m: Tree, idx: int, e: Embedding) -> dict:
        """m_{m,lt}(g) - m for the chosen divisor: the terms replacing m."""
        key = (m, idx)
        got = self._sub.get(key)
        if got is None:
            fld = self.field
            g = self.elts[idx]
            got = {}
            for t2, c in g.element.terms.items():
                if t2 is g.lt:
                    continue
                sign, u = substitute_monomial(m, e, t2)
                v = fld.norm(got.get(u, 0) + sign * c)
                if v:
                    got[u] = v
                else:
                    got.pop(u, None)
            mk = self.order.key(m)
            for u in got:
                if self.order.key(u) >= mk:
                    raise StructuralError(f"reduction step did not decrease: {m} -> {u}")
            self._sub[key] = got
        return got

    def reduce(self, f: OperadElement) -> OperadElement:
        fld = self.field
        nk = self.order.neg_key if hasattr(self.order, "neg_key") else None
        work = dict(f.terms)
        heap = []
        counter = itertools.count()
        for t in work:
            heap.append((nk(t) if nk else _Rev(self.order.key(t)), next(counter), t))
        heapq.heapify(heap)
        out = {}
        while heap:
            _, _, m = heapq.heappop(heap)
            c = work.pop(m, 0)
            if c == 0:
                continue
            d = self.divisor(m)
            if d is None:
                out[m] = c
                continue
            self.steps += 1
            idx, e = d
            for u, a in self._rewrite(m, idx, e).items():
                old = work.get(u)
                v = fld.norm((old or 0) - c * a)
                if old is None:
                    heapq.heappush(heap, (nk(u) if nk else _Rev(self.order.key(u)),
                                          next(counter), u))
                work[u] = v
        return OperadElement._raw(out, fld, f.arity)

    def is_normal(self, m: Tree) -> bool:
        return self.divisor(m) is None


class _Rev:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k


def reduce(f: OperadElement, g: GroebnerBasis) -> OperadElement:
    """Normal form of f modulo the leading monomials of g."""
    return g.reducer().reduce(f)


# small common multiples --------------------------------------------------------

def _merge(s: Tree | None, t: Tree | None) -> Tree | None | bool:
    """Overlay t onto s, both rooted at the same vertex.  False on a clash."""
    if t is None:
        return s
    if s is None:
        return t
    if s.gen != t.gen:
        return False
    kids = []
    for a, b in zip(s.children, t.children):
        m = _merge(a, b)
        if m is False:
            return False
        kids.append(m)
    return Tree(s.gen, tuple(kids))


def _replace(s: Tree, path: Sequence[int], new: Tree) -> Tree:
    if not path:
        return new
    kids = list(s.children)
    kids[path[0]] = _replace(s.children[path[0]], path[1:], new)
    return Tree(s.gen, tuple(kids))


def _overlaps(host: Tree, inner: Tree, skip_root: bool) -> list:
    """Place inner's root on each vertex of host and overlay."""
    out = []
    for path, sub in host.vertices():
        if skip_root and not path:
            continue
        merged = _merge(sub, inner)
        if merged is False:
            continue
        u = _replace(host, path, merged)
        e_host = Embedding((), host, match_at(u, host))
        e_inner = Embedding(path, inner, match_at(u.subtree(path), inner))
        out.append((u, e_host, e_inner))
    return out


def small_common_multiples(s: Tree, t: Tree) -> list[tuple[Tree, Embedding, Embedding]]:
    """All small common multiples U of s and t as (U, e_s, e_t).

    Either t's root sits on a vertex of s, or s's root sits on a non-root
    vertex of t.  For s = t only proper overlaps (t's root on a non-root
    vertex of s) are listed.
    """
    if s.gen is None or t.gen is None:
        return []
    out = []
    self_pair = s is t
    out.extend(_overlaps(s, t, self_pair))
    if not self_pair:
        for u, et, es in _overlaps(t, s, True):
            out.append((u, es, et))
    return out


def s_polynomial(f: GBElement, g: GBElement, overlap: tuple) -> OperadElement:
    u, ef, eg = overlap
    if ef.divisor is not f.lt or eg.divisor is not g.lt:
        raise ValueError("overlap does not belong to these elements")
    if match_at(u.subtree(ef.path), f.lt) is None or match_at(u.subtree(eg.path), g.lt) is None:
        raise ValueError("invalid overlap")
    a = substitute(u, ef, f.element)
    b = substitute(u, eg, g.element)
    res = a - b
    if u in res.terms:
        raise StructuralError("S-polynomial did not cancel the common multiple")
    return res


# completion -------------------------------------------------------------------------

def _pairs_for(elts: list[GBElement], k: int, bounds: Bounds):
    new = elts[k]
    for i in range(k + 1):
        old = elts[i]
        for ov in small_common_multiples(old.lt, new.lt):
            u = ov[0]
            if bounds.admits(u):
                yield i, k, ov


def buchberger(relations: Iterable[OperadElement], o: MonomialOrder, bounds: Bounds,
               field: Field | None = None, reduce_output: bool = True,
               progress=None) -> GroebnerBasis:
    """Truncated completion; every S-polynomial whose SCM fits the bounds reduces to 0."""
    relations = [r for r in relations]
    if field is None:
        field = relations[0].field if relations else QQ
    red = Reducer(o, field)
    queue: list = []
    counter = itertools.count()

    def admit(h: OperadElement, origin):
        g = as_gb_element(h, o, origin)
        k = red.add(g)
        for i, j, ov in _pairs_for(red.elts, k, bounds):
            u = ov[0]
            heapq.heappush(queue, (u.arity, u.weight, next(counter), i, j, ov))

    for r in relations:
        if r.field != field:
            raise ValueError("relations over different fields")
        h = red.reduce(r)
        if h:
            admit(h, ("input",))
    while queue:
        _, _, _, i, j, ov = heapq.heappop(queue)
        s = s_polynomial(red.elts[i], red.elts[j], ov)
        h = red.reduce(s)
        if h:
            admit(h, ("spoly", i, j))
            if progress:
                progress(len(red.elts), len(queue))
    gb = GroebnerBasis(list(red.elts), o, bounds, field, False)
    gb._reducer = red
    return reduce_gb(gb) if reduce_output else gb


def reduce_gb(g: GroebnerBasis) -> GroebnerBasis:
    """Inter-reduce: drop elements with divisible leading terms, reduce tails, make monic."""
    o = g.order
    elts = sorted(g.elements, key=lambda e: o.key(e.lt))
    keep: list[GBElement] = []
    for e in elts:
        if any(_first_divisor(e.lt, k.lt) is not None for k in keep):
            continue
        keep.append(e)
    red = Reducer(o, g.field)
    for e in keep:
        red.add(e)
    out = []
    for e in keep:
        tail = OperadElement._raw({t: c for t, c in e.element.terms.items() if t is not e.lt},
                                  g.field, e.element.arity)
        nf = red.reduce(tail)
        terms = dict(nf.terms)
        terms[e.lt] = 1
        out.append(GBElement(OperadElement._raw(terms, g.field, e.element.arity), e.lt, e.origin))
    res = GroebnerBasis(out, o, g.bounds, g.field, True)
    return res


def is_groebner(g: GroebnerBasis) -> tuple[bool, tuple | None]:
    """Diamond-lemma check within the bounds; certificate (i, j, U, remainder) on failure."""
    red = g.reducer()
    elts = g.elements
    for k in range(len(elts)):
        for i, j, ov in _pairs_for(elts, k, g.bounds):
            s = s_polynomial(elts[i], elts[j], ov)
            r = red.reduce(s)
            if r:
                return False, (i, j, ov[0], r)
    return True, None


def normal_enumerator(g: GroebnerBasis, gens: Sequence[Generator]) -> _Enumerator:
    """Bottom-up generator of G-normal trees (children of normal trees are normal)."""
    by_root: dict = {}
    for e in g.elements:
        by_root.setdefault(e.lt.gen, []).append(e.lt)

    def keep(t: Tree) -> bool:
        for lt in by_root.get(t.gen, ()):
            if match_at(t, lt) is not None:
                return False
        return True
    return _Enumerator(gens, keep)


def normal_monomials(g: GroebnerBasis, arity: int, max_weight: int,
                     gens: Sequence[Generator] | None = None) -> list[Tree]:
    """Monomials of the arity, weight <= max_weight, divisible by no leading monomial."""
    if gens is None:
        gens = getattr(g.order, "alphabet", None)
        if gens is None:
            raise ValueError("generators must be given for this order")
    en = normal_enumerator(g, gens)
    out = []
    for w in range(max_weight + 1):
        out.extend(en.trees(arity, w))
    out.sort(key=g.order.key)
    return out


def cell_quotient_dimension(relations: Sequence[OperadElement], gens: Sequence[Generator],
                            arity: int, weight: int, o: MonomialOrder,
                            field: Field = QQ) -> int:
    """Dimension of one (arity, weight) cell of the quotient, by plain row reduction.

    The ideal component is spanned by every relation wrapped in every context
    landing in the cell.  Relations must be homogeneous in weight.
    """
    cell = _Enumerator(gens).trees(arity, weight)
    index = {t: k for k, t in enumerate(cell)}
    ech = Echelon(len(cell), field)
    for r in relations:
        if not r.terms:
            continue
        anchor = next(iter(r.terms))
        for s in cell:
            for e in find_divisors(s, anchor):
                v = substitute(s, e, r)
                row = {}
                for t, c in v.terms.items():
                    if t not in index:
                        raise ValueError("relation is not weight-homogeneous")
                    row[index[t]] = c
                ech.add(row)
    return len(cell) - ech.rank
