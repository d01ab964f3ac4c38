"""N-homogeneous algebras T(V)/(R), their duals, and the A_{2,N} structure on A^!."""
from __future__ import annotations

import itertools
from functools import cached_property
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import QQ, Echelon, ExactMatrix, Field, annihilator, row_reduce, vec_axpy


def word_index(word: Sequence[int], v_dim: int) -> int:
    k = 0
    for a in word:
        k = k * v_dim + a
    return k


def index_word(k: int, v_dim: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        k, a = divmod(k, v_dim)
        out.append(a)
    return tuple(reversed(out))


def default_names(v_dim: int) -> tuple[str, ...]:
    if v_dim <= 3:
        return ("x", "y", "z")[:v_dim]
    return tuple(f"x{i}" for i in range(1, v_dim + 1))


class NHomogPresentation:
    """A = T(V)/(R) with R a subspace of V^{⊗N}; rows of ``relations`` span R.

    Coordinates on V^{⊗N} index words lexicographically (first letter most
    significant).  Rows are stored in reduced echelon form.
    """

    def __init__(self, n: int, v_dim: int, relations: ExactMatrix | None = None,
                 field: Field | None = None, names: Sequence[str] | None = None):
        if n < 2:
            raise ValueError("N must be at least 2")
        if v_dim < 1:
            raise ValueError("dim V must be at least 1")
        if field is None:
            field = relations.field if relations is not None else QQ
        if relations is None:
            relations = ExactMatrix(0, v_dim ** n, [], field)
        if relations.ncols != v_dim ** n:
            raise ValueError(f"relations must have {v_dim ** n} columns")
        if relations.field != field:
            raise ValueError("relation matrix is over a different field")
        self.n = n
        self.v_dim = v_dim
        self.field = field
        self.relations = row_reduce(relations).row_basis
        self.names = tuple(names) if names is not None else default_names(v_dim)
        if len(self.names) != v_dim or len(set(self.names)) != v_dim:
            raise ValueError("need one distinct name per basis vector of V")
        self._quotient = None

    @classmethod
    def from_words(cls, n: int, v_dim: int, relations: Iterable[dict],
                   field: Field = QQ, names: Sequence[str] | None = None) -> "NHomogPresentation":
        rows = []
        for r in relations:
            row = {}
            for w, c in r.items():
                if len(w) != n:
                    raise ValueError(f"relation word {w} does not have length {n}")
                row[word_index(w, v_dim)] = field(c)
            rows.append(row)
        return cls(n, v_dim, ExactMatrix(len(rows), v_dim ** n, rows, field), field, names)

    @property
    def dim_r(self) -> int:
        return self.relations.nrows

    def relation_words(self) -> list[dict[tuple, object]]:
        return [{index_word(k, self.v_dim, self.n): c for k, c in row.items()}
                for row in self.relations.rows]

    def quotient(self) -> "TensorQuotient":
        if self._quotient is None:
            self._quotient = TensorQuotient(self.v_dim, self.n, self.relation_words(), self.field)
        return self._quotient

    def same_relations(self, other: "NHomogPresentation") -> bool:
        return (self.n, self.v_dim, self.field) == (other.n, other.v_dim, other.field) \
            and self.relations == other.relations

    def __repr__(self):
        return f"NHomogPresentation(N={self.n}, dim V={self.v_dim}, dim R={self.dim_r}, {self.field.name})"


def dual_presentation(a: NHomogPresentation) -> NHomogPresentation:
    """A^∨ = T(V*)/(R^⊥) under the pairing of dual word bases."""
    perp = annihilator(a.relations, a.v_dim ** a.n)
    names = tuple(f"{s}*" if not s.endswith("*") else s[:-1] for s in a.names)
    return NHomogPresentation(a.n, a.v_dim, perp, a.field, names)


class TensorQuotient:
    """Weight-by-weight normal words of T(V)/(R).

    A_m is computed as (A_{m-1} ⊗ V) / (A_{m-N} · R).  Basis words are the
    non-pivot columns, so every prefix of a basis word is a basis word.
    """

    def __init__(self, v_dim: int, n: int, relations: list[dict], field: Field = QQ):
        self.v = v_dim
        self.n = n
        self.field = field
        self.rels = relations
        self.basis: list[list[tuple]] = [[()]]
        self.index: list[dict] = [{(): 0}]
        # right[m][col] for col = i*v + l: class of basis[m-1][i]·l in A_m
        self.right: list[list[dict] | None] = [None]
        self._prod: dict = {}

    def ensure(self, m: int) -> None:
        while len(self.basis) <= m:
            self._next()

    def dim(self, m: int) -> int:
        self.ensure(m)
        return len(self.basis[m])

    def dims(self, upto: int) -> list[int]:
        return [self.dim(m) for m in range(upto + 1)]

    def _next(self) -> None:
        m = len(self.basis)
        v = self.v
        prev = self.basis[m - 1]
        ncols = len(prev) * v
        fld = self.field
        if m < self.n or not self.rels:
            words = [w + (l,) for w in prev for l in range(v)]
            self.basis.append(words)
            self.index.append({w: k for k, w in enumerate(words)})
            self.right.append([{k: 1} for k in range(ncols)])
            return
        ech = Echelon(ncols, fld)
        for beta in range(len(self.basis[m - self.n])):
            unit = {beta: 1}
            for r in self.rels:
                row: dict = {}
                for w, c in r.items():
                    x = self.right_word(unit, m - self.n, w[:-1])
                    for j, a in x.items():
                        col = j * v + w[-1]
                        s = fld.norm(row.get(col, 0) + c * a)
                        if s:
                            row[col] = s
                        else:
                            row.pop(col, None)
                ech.add(row)
        free = [c for c in range(ncols) if c not in ech.piv]
        newidx = {c: k for k, c in enumerate(free)}
        words = [prev[c // v] + (c % v,) for c in free]
        right: list[dict] = []
        for c in range(ncols):
            if c in newidx:
                right.append({newidx[c]: 1})
            else:
                right.append({newidx[q]: fld.norm(-a) for q, a in ech.piv[c].items() if q != c})
        self.basis.append(words)
        self.index.append({w: k for k, w in enumerate(words)})
        self.right.append(right)

    def right_letter(self, x: dict, m: int, letter: int) -> dict:
        """x in A_m times a letter, as a vector of A_{m+1}."""
        self.ensure(m + 1)
        tab = self.right[m + 1]
        out: dict = {}
        v = self.v
        for i, a in x.items():
            vec_axpy(out, a, tab[i * v + letter], self.field)
        return out

    def right_word(self, x: dict, m: int, word: Sequence[int]) -> dict:
        for k, l in enumerate(word):
            x = self.right_letter(x, m + k, l)
            if not x:
                break
        return x

    def prod_basis(self, a: int, i: int, b: int, j: int) -> dict:
        """basis[a][i] · basis[b][j] in A_{a+b}."""
        key = (a, i, b, j)
        got = self._prod.get(key)
        if got is None:
            if b == 0:
                got = {i: 1}
            else:
                self.ensure(b)
                w = self.basis[b][j]
                parent = self.index[b - 1][w[:-1]]
                got = self.right_letter(self.prod_basis(a, i, b - 1, parent), a + b - 1, w[-1])
            self._prod[key] = got
        return got

    def multiply(self, x: dict, a: int, y: dict, b: int) -> dict:
        out: dict = {}
        fld = self.field
        for i, p in x.items():
            for j, q in y.items():
                vec_axpy(out, fld.norm(p * q), self.prod_basis(a, i, b, j), fld)
        return out

    def word_class(self, word: Sequence[int]) -> dict:
        return self.right_word({0: 1}, 0, word)


def weight_basis(a: NHomogPresentation, m: int) -> list[tuple[int, ...]]:
    """Normal words spanning A_m."""
    q = a.quotient()
    q.ensure(m)
    return list(q.basis[m])


# graded spaces and multilinear maps --------------------------------------------

class GradedSpace:
    """Direct sum of weight blocks; a flat index addresses each basis vector."""

    def __init__(self, blocks: Sequence[tuple[int, int, int]]):
        # blocks: (weight, dim, degree)
        self.blocks = tuple(blocks)
        self.weight: list[int] = []
        self.degree: list[int] = []
        self.local: list[int] = []
        self.offset: dict[int, int] = {}
        self.block_dim: dict[int, int] = {}
        self.block_degree: dict[int, int] = {}
        for w, d, deg in self.blocks:
            self.offset[w] = len(self.weight)
            self.block_dim[w] = d
            self.block_degree[w] = deg
            for k in range(d):
                self.weight.append(w)
                self.degree.append(deg)
                self.local.append(k)

    def __len__(self):
        return len(self.weight)

    def flat(self, w: int, k: int) -> int:
        return self.offset[w] + k

    def lift(self, w: int, vec: dict) -> dict:
        off = self.offset[w]
        return {off + k: c for k, c in vec.items()}


@dataclass
class MultilinearMap:
    """A k-ary map on a graded space, given by its nonzero values on basis tuples."""

    space: GradedSpace
    arity: int
    degree: int
    table: dict[tuple[int, ...], dict[int, object]]
    field: Field = QQ

    def value(self, xs: tuple[int, ...]) -> dict:
        return self.table.get(xs, {})

    def is_zero(self) -> bool:
        return not any(self.table.values())

    def first_nonzero(self):
        for k in sorted(self.table):
            if self.table[k]:
                return k, self.table[k]
        return None


def compose_maps(f: MultilinearMap, i: int, g: MultilinearMap) -> dict:
    """(f ∘_i g)(x_1..) = (-1)^{|g|(|x_1|+..+|x_{i-1}|)} f(x_1.., g(x_i..x_{i+l-1}), ..)."""
    if f.space is not g.space:
        raise ValueError("maps live on different spaces")
    if not 1 <= i <= f.arity:
        raise ValueError("slot out of range")
    deg = f.space.degree
    fld = f.field
    by_val: dict[int, list] = {}
    for xs, fv in f.table.items():
        if fv:
            by_val.setdefault(xs[i - 1], []).append((xs, fv))
    out: dict[tuple, dict] = {}
    godd = g.degree & 1
    for ys, gv in g.table.items():
        for o, a in gv.items():
            for xs, fv in by_val.get(o, ()):
                ins = xs[:i - 1] + ys + xs[i:]
                c = a
                if godd and sum(deg[x] for x in xs[:i - 1]) & 1:
                    c = -c
                acc = out.setdefault(ins, {})
                vec_axpy(acc, c, fv, fld)
    return {k: v for k, v in out.items() if v}


def star_product(f: MultilinearMap, g: MultilinearMap) -> MultilinearMap:
    """f ⋆ g = Σ_i (-1)^{q(k-1)+(l-1)(i-1)} f ∘_i g."""
    if f.space is not g.space:
        raise ValueError("dimension mismatch: maps live on different spaces")
    k, l, q = f.arity, g.arity, g.degree
    fld = f.field
    out: dict[tuple, dict] = {}
    for i in range(1, k + 1):
        sign = -1 if (q * (k - 1) + (l - 1) * (i - 1)) & 1 else 1
        for ins, v in compose_maps(f, i, g).items():
            acc = out.setdefault(ins, {})
            vec_axpy(acc, sign, v, fld)
    table = {k2: v for k2, v in out.items() if v}
    return MultilinearMap(f.space, k + l - 1, f.degree + g.degree, table, fld)


def add_maps(f: MultilinearMap, g: MultilinearMap) -> MultilinearMap:
    if f.arity != g.arity or f.space is not g.space:
        raise ValueError("cannot add maps of different shapes")
    out = {k: dict(v) for k, v in f.table.items()}
    for k, v in g.table.items():
        acc = out.setdefault(k, {})
        vec_axpy(acc, 1, v, f.field)
    return MultilinearMap(f.space, f.arity, f.degree, {k: v for k, v in out.items() if v}, f.field)


@dataclass
class A2NCheck:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def check_a2n_relations(mu2: MultilinearMap, mun: MultilinearMap) -> A2NCheck:
    """μ2⋆μ2 = μ2⋆μN + μN⋆μ2 = μN⋆μN = 0 on the stored range; first failing tuple."""
    n = mun.arity
    if mu2.arity != 2 or mu2.degree != 0:
        raise ValueError("μ2 must be binary of degree 0")
    if mun.degree != 2 - n:
        raise ValueError(f"μN must have degree {2 - n}")
    checks = [("m2*m2", star_product(mu2, mu2)),
              ("m2*mN+mN*m2", add_maps(star_product(mu2, mun), star_product(mun, mu2))),
              ("mN*mN", star_product(mun, mun))]
    for name, m in checks:
        hit = m.first_nonzero()
        if hit is not None:
            return A2NCheck(False, (name,) + hit)
    return A2NCheck(True)


def check_mun_composites(mun: MultilinearMap) -> A2NCheck:
    """μN ∘_i μN = 0 for every slot i."""
    for i in range(1, mun.arity + 1):
        comp = compose_maps(mun, i, mun)
        for k in sorted(comp):
            return A2NCheck(False, (f"mN o{i} mN", k, comp[k]))
    return A2NCheck(True)


# Koszul dual algebra and coalgebra ----------------------------------------------

def dual_weights(n: int, bound: int) -> list[int]:
    return [m for m in range(1, bound + 1) if m % n in (0, 1)]


def dual_degree(n: int, m: int) -> int:
    if m % n == 0:
        return 2 * (m // n)
    if m % n == 1:
        return 2 * ((m - 1) // n) + 1
    raise ValueError(f"weight {m} is not 0 or 1 mod {n}")


class KoszulDualAlgebra:
    """E = A^! on weights <= bound: μ2 and μN from the products of A^∨.

    The full structure-constant tables are built on first access.
    """

    def __init__(self, a: NHomogPresentation, bound: int):
        self.a = a
        self.n = a.n
        self.bound = bound
        self.field = a.field
        self.dual = dual_presentation(a)
        self.q = self.dual.quotient()
        n = self.n
        self.weights = dual_weights(n, bound)
        self.space = GradedSpace([(m, self.q.dim(m), dual_degree(n, m)) for m in self.weights])

    def dim(self, m: int) -> int:
        return self.space.block_dim.get(m, 0)

    def is_odd(self, m: int) -> bool:
        return m % self.n == 1

    def degree(self, m: int) -> int:
        return dual_degree(self.n, m)

    def allowed2(self, a: int, b: int) -> bool:
        return a + b <= self.bound and not (self.is_odd(a) and self.is_odd(b)) \
            and a in self.space.offset and b in self.space.offset

    def mu2_vec(self, a: int, x: dict, b: int, y: dict) -> tuple[int, dict]:
        """μ2 on homogeneous local vectors; zero outside the allowed patterns."""
        if not x or not y or not self.allowed2(a, b):
            return a + b, {}
        return a + b, self.q.multiply(x, a, y, b)

    def mun_vec(self, args: Sequence[tuple[int, dict]]) -> tuple[int, dict]:
        total = sum(w for w, _ in args)
        if len(args) != self.n or total > self.bound \
                or not all(self.is_odd(w) and x for w, x in args):
            return total, {}
        w0, acc = args[0]
        for w, x in args[1:]:
            acc = self.q.multiply(acc, w0, x, w)
            w0 += w
            if not acc:
                break
        return total, acc

    def iterated(self, ws: Sequence[int], idxs: Sequence[int]) -> dict:
        """Product of A^∨ basis vectors basis[ws[k]][idxs[k]], left to right."""
        acc = {idxs[0]: 1}
        w0 = ws[0]
        for w, i in zip(ws[1:], idxs[1:]):
            acc = self.q.multiply(acc, w0, {i: 1}, w)
            w0 += w
            if not acc:
                break
        return acc

    @cached_property
    def mu2(self) -> MultilinearMap:
        sp = self.space
        out = {}
        for a in self.weights:
            for b in self.weights:
                if not self.allowed2(a, b):
                    continue
                for i in range(self.dim(a)):
                    for j in range(self.dim(b)):
                        v = self.q.prod_basis(a, i, b, j)
                        if v:
                            out[(sp.flat(a, i), sp.flat(b, j))] = sp.lift(a + b, v)
        return MultilinearMap(sp, 2, 0, out, self.field)

    def odd_splits(self, total: int, parts: int) -> list[tuple[int, ...]]:
        """Ordered tuples of odd stored weights with the given sum."""
        odd = [m for m in self.weights if self.is_odd(m)]
        out = []

        def rec(prefix, rest, k):
            if k == 0:
                if rest == 0:
                    out.append(tuple(prefix))
                return
            for w in odd:
                if w + (k - 1) > rest:
                    break
                rec(prefix + [w], rest - w, k - 1)
        rec([], total, parts)
        return out

    @cached_property
    def mun(self) -> MultilinearMap:
        sp = self.space
        out = {}
        for total in self.weights:
            if self.is_odd(total):
                continue
            for ws in self.odd_splits(total, self.n):
                for idxs in itertools.product(*(range(self.dim(w)) for w in ws)):
                    acc = self.iterated(ws, idxs)
                    if acc:
                        out[tuple(sp.flat(w, i) for w, i in zip(ws, idxs))] = sp.lift(total, acc)
        return MultilinearMap(sp, self.n, 2 - self.n, out, self.field)


def koszul_dual_algebra(a: NHomogPresentation, bound: int) -> KoszulDualAlgebra:
    return KoszulDualAlgebra(a, bound)


def koszul_sign(degrees: Sequence[int]) -> int:
    """(-1)^{Σ_{i<j} |x_i||x_j|}: the sign of the graded pairing on a tensor word."""
    odd = 0
    s = 0
    for d in degrees:
        if d & 1:
            s += odd
            odd += 1
    return -1 if s & 1 else 1


class KoszulDualCoalgebra:
    """A^¡ = (A^!)^* on weights <= bound, including the counit weight 0.

    Basis vectors are dual to the A^∨ normal words and are addressed as
    (weight, local index); weight 0 has the single index 0.  δ2 and δN are
    transposes of μ2 and μN; with ``twisted`` (the default) they carry the
    pairing sign (-1)^{Σ_{i<j}|c_i||c_j|}.  δ2 includes the counital terms
    1⊗c + c⊗1.  Coproducts are computed per split of the weight, on demand.
    """

    def __init__(self, e: KoszulDualAlgebra, twisted: bool = True):
        self.e = e
        self.n = e.n
        self.bound = e.bound
        self.field = e.field
        self.twisted = twisted
        self.weights = [0] + list(e.weights)
        self._split2: dict = {}
        self._splitn: dict = {}

    def dim(self, m: int) -> int:
        return 1 if m == 0 else self.e.dim(m)

    def degree(self, m: int) -> int:
        return 0 if m == 0 else dual_degree(self.n, m)

    def basis(self, m: int) -> list[tuple[int, int]]:
        return [(m, i) for i in range(self.dim(m))]

    elements = basis

    def deg(self, c) -> int:
        return self.degree(c[0])

    def d(self, c) -> list:
        return []

    def _sign(self, ws) -> int:
        return koszul_sign([self.degree(w) for w in ws]) if self.twisted else 1

    def split2(self, w1: int, w2: int) -> dict:
        """c -> [(coef, (c1, c2))] for the part of δ2 landing in weights (w1, w2)."""
        key = (w1, w2)
        got = self._split2.get(key)
        if got is not None:
            return got
        got = {}
        if w1 == 0 or w2 == 0:
            m = w1 + w2
            if m == 0 or m in self.e.space.offset:
                for i in range(self.dim(m)):
                    c = (m, i)
                    got[c] = [(1, ((0, 0), c) if w1 == 0 else (c, (0, 0)))]
        elif self.e.allowed2(w1, w2):
            s = self._sign((w1, w2))
            q = self.e.q
            for i in range(self.dim(w1)):
                for j in range(self.dim(w2)):
                    for z, c in q.prod_basis(w1, i, w2, j).items():
                        got.setdefault((w1 + w2, z), []).append((s * c, ((w1, i), (w2, j))))
        self._split2[key] = got
        return got

    def splitn(self, ws: tuple[int, ...]) -> dict:
        """c -> [(coef, (c1..cN))] for the part of δN landing in weights ws."""
        got = self._splitn.get(ws)
        if got is not None:
            return got
        got = {}
        e = self.e
        if len(ws) == self.n and all(e.is_odd(w) and w in e.space.offset for w in ws) \
                and sum(ws) <= self.bound:
            s = self._sign(ws)
            total = sum(ws)
            for idxs in itertools.product(*(range(self.dim(w)) for w in ws)):
                for z, c in e.iterated(ws, idxs).items():
                    got.setdefault((total, z), []).append(
                        (s * c, tuple(zip(ws, idxs))))
        self._splitn[ws] = got
        return got

    def delta2(self, c, reduced: bool = False, right: Iterable[int] | None = None) -> list:
        m = c[0]
        w2s = range(m + 1) if right is None else [w for w in right if w <= m]
        out = []
        for w2 in w2s:
            if reduced and (w2 == 0 or w2 == m):
                continue
            out.extend(self.split2(m - w2, w2).get(c, ()))
        return out

    def deltan(self, c, right: Iterable[int] | None = None) -> list:
        """δN(c); with ``right``, only terms whose last N-1 factors have weights in it."""
        m = c[0]
        out = []
        if right is None:
            splits = self.e.odd_splits(m, self.n) if m else []
        else:
            rs = sorted(set(right))
            splits = []
            for tail in itertools.product(rs, repeat=self.n - 1):
                w1 = m - sum(tail)
                if w1 >= 1:
                    splits.append((w1,) + tail)
        for ws in splits:
            out.extend(self.splitn(ws).get(c, ()))
        return out


def koszul_dual_coalgebra(a: NHomogPresentation, bound: int, twisted: bool = True) -> KoszulDualCoalgebra:
    return KoszulDualCoalgebra(KoszulDualAlgebra(a, bound), twisted)


def check_coalgebra_relations(c: KoszulDualCoalgebra) -> A2NCheck:
    """δ2⋆δ2 = δ2⋆δN + δN⋆δ2 = δN⋆δN = 0 on the reduced coalgebra.

    (f ⋆ g) = Σ_i (-1)^{q(k-1)+(l-1)(i-1)} (id^{i-1} ⊗ g ⊗ id^{k-i}) ∘ f with
    the Koszul sign of g passing the first i-1 tensor factors.
    """
    n = c.n
    fld = c.field
    ops = {2: (0, lambda x: c.delta2(x, reduced=True)), n: (2 - n, c.deltan)}

    def star(k: int, l: int, x, out: dict) -> dict:
        _, f = ops[k]
        gdeg, g = ops[l]
        for a, parts in f(x):
            for i in range(1, k + 1):
                sign = -1 if (gdeg * (k - 1) + (l - 1) * (i - 1)) & 1 else 1
                if gdeg & 1 and sum(c.degree(p[0]) for p in parts[:i - 1]) & 1:
                    sign = -sign
                for b, sub in g(parts[i - 1]):
                    key = parts[:i - 1] + sub + parts[i:]
                    v = fld.norm(out.get(key, 0) + sign * a * b)
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return out
    for m in c.weights[1:]:
        for x in c.basis(m):
            if star(2, 2, x, {}):
                return A2NCheck(False, ("d2*d2", x))
            if star(n, 2, x, star(2, n, x, {})):
                return A2NCheck(False, ("d2*dN+dN*d2", x))
            if star(n, n, x, {}):
                return A2NCheck(False, ("dN*dN", x))
    return A2NCheck(True)


def random_presentation(rng, n: int, v_dim: int, dim_r: int, field: Field = QQ,
                        max_terms: int = 3) -> NHomogPresentation:
    """R spanned by dim_r independent sparse relations with coefficients ±1.

    Sparse rows keep exact rational normal forms small.
    """
    total = v_dim ** n
    if not 0 <= dim_r <= total:
        raise ValueError(f"dim R must lie in 0..{total}")
    ech = Echelon(total, field)
    rows = []
    while len(rows) < dim_r:
        k = rng.randint(1, min(max_terms, total))
        row = {w: field(rng.choice((1, -1))) for w in rng.sample(range(total), k)}
        if ech.add(row):
            rows.append(row)
    return NHomogPresentation(n, v_dim, ExactMatrix(dim_r, total, rows, field), field)


# comparison with NA_{2,N}(V*)/(μ2(V*, V*), μN(R^⊥)) -------------------------------

@dataclass
class CompareReport:
    max_weight: int
    dims_operadic: dict[int, int]
    dims_dual: dict[int, int]
    equal_by_weight: dict[int, bool]
    bases_matched: bool
    structure_equal: bool
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return all(self.equal_by_weight.values()) and self.bases_matched and self.structure_equal


def kd_algebra_presentation(a: NHomogPresentation):
    """NA_{2,N}-algebra generated by e_i (weight 1, degree 1) with μ2(e_i, e_j) = 0 and μN(R^⊥) = 0."""
    from .na2n import na2n_presentation
    from .operad_algebra import AlgebraPresentation, extended_generators
    from .trees import Generator, OperadElement, Tree

    if a.n < 3:
        raise ValueError("NA_{2,N} needs N >= 3")
    fld = a.field
    p = na2n_presentation(a.n, fld)
    consts = [Generator(f"e{i + 1}", 0, 1, 1, True) for i in range(a.v_dim)]
    table = {g.name: g for g in extended_generators(p, consts)}
    m2, mn = table["m2"], table[f"m{a.n}"]
    leaves = [Tree(table[c.name]) for c in consts]
    rels = [OperadElement.monomial(Tree(m2, (x, y)), 1, fld) for x in leaves for y in leaves]
    perp = dual_presentation(a)
    for row in perp.relations.rows:
        terms = {Tree(mn, tuple(leaves[k] for k in index_word(w, a.v_dim, a.n))): c
                 for w, c in row.items()}
        rels.append(OperadElement(terms, fld, 0))
    return AlgebraPresentation(p, consts, rels), table


def presentation_compare(a: NHomogPresentation, max_weight: int, check_structure: bool = True) -> CompareReport:
    """Compare A^! with NA_{2,N}(V*)/(μ2(V*, V*), μN(R^⊥)) up to max_weight.

    Normal trees are evaluated in E by e_i ↦ e_i and μ ↦ μ_E; this must
    send each weight's normal trees to a basis of E_m, and μ2, μN of normal
    trees (reduced by the Gröbner basis) must agree with μ2, μN of E.
    """
    from .groebner import Bounds
    from .operad_algebra import algebra_groebner, algebra_normal_basis
    from .linalg import rank
    from .trees import OperadElement, Tree

    if max_weight < 1:
        raise ValueError("bounds too small to certify anything")
    alg, table = kd_algebra_presentation(a)
    gb = algebra_groebner(alg, bounds=Bounds(max_size=max_weight))
    basis = algebra_normal_basis(alg, gb, max_weight)
    e = KoszulDualAlgebra(a, max_weight)
    fld = a.field
    n = a.n
    m2, mn = table["m2"], table[f"m{n}"]

    dims_op = {m: len(basis[m]) for m in range(1, max_weight + 1)}
    dims_e = {m: e.dim(m) for m in range(1, max_weight + 1)}
    equal = {m: dims_op[m] == dims_e[m] for m in dims_op}

    ev_cache: dict = {}

    def ev(t: Tree) -> dict:
        got = ev_cache.get(t)
        if got is None:
            if t.gen.arity == 0:
                got = {int(t.gen.name[1:]) - 1: 1}
            elif t.gen.name == "m2":
                (x, y) = t.children
                got = e.mu2_vec(x.weight, ev(x), y.weight, ev(y))[1]
            else:
                got = e.mun_vec([(c.weight, ev(c)) for c in t.children])[1]
            ev_cache[t] = got
        return got

    def ev_elem(f: OperadElement) -> dict:
        out: dict = {}
        for t, c in f.terms.items():
            vec_axpy(out, c, ev(t), fld)
        return out

    matched = True
    witness = None
    for m in range(1, max_weight + 1):
        if not equal[m]:
            witness = witness or ("dimension", m, dims_op[m], dims_e[m])
            matched = False
            continue
        if dims_e[m]:
            mat = ExactMatrix(dims_e[m], dims_e[m], [ev(t) for t in basis[m]], fld)
            if rank(mat) != dims_e[m]:
                matched = False
                witness = witness or ("basis", m)

    structure = True
    if check_structure and matched:
        red = gb.reducer()
        ops: list = []
        trees = [t for m in range(1, max_weight + 1) for t in basis[m]]
        for x in trees:
            for y in trees:
                if x.weight + y.weight <= max_weight:
                    ops.append((m2, (x, y)))
        odd = [t for t in trees if t.weight % n == 1]

        def tuples(prefix, total):
            if len(prefix) == n:
                ops.append((mn, tuple(prefix)))
                return
            for t in odd:
                if total + t.weight + (n - len(prefix) - 1) <= max_weight:
                    tuples(prefix + [t], total + t.weight)
        tuples([], 0)
        for g, args in ops:
            t = Tree(g, args)
            lhs = ev_elem(red.reduce(OperadElement.monomial(t, 1, fld)))
            if g.name == "m2":
                rhs = e.mu2_vec(args[0].weight, ev(args[0]), args[1].weight, ev(args[1]))[1]
            else:
                rhs = e.mun_vec([(c.weight, ev(c)) for c in args])[1]
            if lhs != rhs:
                structure = False
                witness = ("structure", t)
                break
    return CompareReport(max_weight, dims_op, dims_e, equal, matched, structure and matched, witness)
