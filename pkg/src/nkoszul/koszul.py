"""Twisting morphisms, twisted tensor products, Koszul complexes and the bar/cobar oracles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .linalg import GF, ExactMatrix, Field, StructuralError, WeightedComplex, homology_dims, vec_axpy
from .nhomog import (KoszulDualCoalgebra, NHomogPresentation, TensorQuotient, dual_degree,
                     dual_presentation, koszul_dual_coalgebra)


def _add(acc: dict, key, c, fld: Field) -> None:
    v = fld.norm(acc.get(key, 0) + c)
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


# twisting morphisms ------------------------------------------------------------

@dataclass
class TwistingMorphism:
    """A weight-preserving map C -> A, stored on basis elements of C.

    ``components[c]`` is a vector of A_{weight(c)}; absent elements map to 0.
    """

    source: object
    target: TensorQuotient
    components: dict = dc_field(default_factory=dict)
    degree: int = -1

    @property
    def field(self) -> Field:
        return self.target.field

    def value(self, c) -> dict:
        return self.components.get(c, {})

    def support(self) -> list[int]:
        return sorted({c[0] for c, v in self.components.items() if v})

    def weight_matrix(self, m: int) -> ExactMatrix:
        elems = self.source.elements(m)
        return ExactMatrix(len(elems), self.target.dim(m),
                           [dict(self.value(c)) for c in elems], self.field)


def kappa(a: NHomogPresentation, bound: int, coalgebra: KoszulDualCoalgebra | None = None) -> TwistingMorphism:
    """A^¡ -> A^¡_1 = V -> A."""
    c = coalgebra or koszul_dual_coalgebra(a, bound)
    return TwistingMorphism(c, a.quotient(), {(1, i): {i: 1} for i in range(a.v_dim)})


def convolution_star2(f: TwistingMorphism, g: TwistingMorphism, max_weight: int) -> dict:
    """⋆2(f, g)(c) = Σ (-1)^{|g||c1|} f(c1)·g(c2) over δ2(c)."""
    if f.source is not g.source or f.target is not g.target:
        raise ValueError("range mismatch")
    src, tgt, fld = f.source, f.target, f.field
    right = g.support()
    out = {}
    for m in range(max_weight + 1):
        for c in src.elements(m):
            acc: dict = {}
            for coef, (c1, c2) in src.delta2(c, right=right):
                x, y = f.value(c1), g.value(c2)
                if not x or not y:
                    continue
                s = -coef if (g.degree & 1 and src.deg(c1) & 1) else coef
                vec_axpy(acc, s, tgt.multiply(x, c1[0], y, c2[0]), fld)
            if acc:
                out[c] = acc
    return out


def convolution_starN(fs: Sequence[TwistingMorphism], max_weight: int) -> dict:
    """⋆N(f_1..f_N)(c) = Σ ± f_1(c_1)···f_N(c_N) over δN(c), with Koszul signs."""
    src, tgt = fs[0].source, fs[0].target
    if any(f.source is not src or f.target is not tgt for f in fs):
        raise ValueError("range mismatch")
    if len(fs) != src.n:
        raise ValueError(f"need {src.n} maps")
    fld = tgt.field
    right = sorted(set().union(*(f.support() for f in fs[1:])))
    out = {}
    for m in range(max_weight + 1):
        for c in src.elements(m):
            acc: dict = {}
            for coef, parts in src.deltan(c, right=right):
                vals = [f.value(p) for f, p in zip(fs, parts)]
                if not all(vals):
                    continue
                e = 0
                seen = 0
                for f, p in zip(fs, parts):
                    e += f.degree * seen
                    seen += src.deg(p)
                prod, w = vals[0], parts[0][0]
                for v, p in zip(vals[1:], parts[1:]):
                    prod = tgt.multiply(prod, w, v, p[0])
                    w += p[0]
                vec_axpy(acc, -coef if e & 1 else coef, prod, fld)
            if acc:
                out[c] = acc
    return out


@dataclass
class MCResult:
    ok: bool
    witness_weight: int | None = None
    witness: object = None

    def __bool__(self):
        return self.ok


def maurer_cartan_check(alpha: TwistingMorphism, max_weight: int) -> MCResult:
    """∂α + ⋆2(α, α) + ⋆N(α, .., α) = 0 weight by weight; ∂α = α∘d_C since A has d = 0."""
    src, fld = alpha.source, alpha.field
    total: dict = {}
    for c, v in convolution_star2(alpha, alpha, max_weight).items():
        total[c] = dict(v)
    if getattr(src, "n", None):
        for c, v in convolution_starN([alpha] * src.n, max_weight).items():
            vec_axpy(total.setdefault(c, {}), 1, v, fld)
    for m in range(max_weight + 1):
        for c in src.elements(m):
            for coef, c2 in src.d(c):
                vec_axpy(total.setdefault(c, {}), coef, alpha.value(c2), fld)
    bad = sorted((c for c, v in total.items() if v), key=lambda c: (c[0], repr(c)))
    if bad:
        return MCResult(False, bad[0][0], bad[0])
    return MCResult(True)


# twisted tensor products ---------------------------------------------------------

@dataclass
class TwistedComplex:
    complex: WeightedComplex
    max_weight: int

    def homology(self, m: int) -> dict[int, int]:
        return homology_dims(self.complex, m)

    def matrices(self, m: int) -> dict[int, ExactMatrix]:
        return dict(self.complex.diffs.get(m, {}))


def _tensor_basis(src, tgt: TensorQuotient, m: int) -> dict[int, list]:
    comps: dict[int, list] = {}
    for j in range(m + 1):
        for c in src.elements(j):
            for a in range(tgt.dim(m - j)):
                comps.setdefault(src.deg(c), []).append((c, a))
    return comps


def _assemble(fld: Field, m: int, comps: dict[int, list], image, cx: WeightedComplex) -> None:
    index = {h: {x: k for k, x in enumerate(b)} for h, b in comps.items()}
    cx.dims[m] = {h: len(b) for h, b in comps.items()}
    cx.labels[m] = comps
    diffs = {}
    for h, b in comps.items():
        if h - 1 not in comps:
            continue
        tgt_index = index[h - 1]
        rows = []
        for x in b:
            row = {}
            for key, c in image(x).items():
                col = tgt_index.get(key)
                if col is None:
                    raise StructuralError(f"weight {m}: image of {x} leaves degree {h - 1}")
                row[col] = c
            rows.append(row)
        diffs[h] = ExactMatrix.raw(len(b), len(comps[h - 1]), rows, fld)
    cx.diffs[m] = diffs


def twisted_tensor_product(c, a: TensorQuotient, alpha: TwistingMorphism, max_weight: int) -> TwistedComplex:
    """C ⊗_α A with d_α = d_C ⊗ 1 + d2 + dN.

    d2(c ⊗ a) = Σ (-1)^{|c1|} c1 ⊗ α(c2)·a over δ2(c), and dN carries the
    Koszul sign of passing α across c1..c_{j-1} for each factor j >= 2.
    Raises StructuralError when d_α² ≠ 0.
    """
    if alpha.degree != -1:
        raise ValueError("a twisting morphism has degree -1")
    fld = a.field
    right = alpha.support()
    n = getattr(c, "n", None)
    cx = WeightedComplex(fld)

    for m in range(max_weight + 1):
        def image(x):
            cc, ai = x
            rest = m - cc[0]
            out: dict = {}
            for coef, c2 in c.d(cc):
                _add(out, (c2, ai), coef, fld)
            for coef, (c1, c2) in c.delta2(cc, right=right):
                v = alpha.value(c2)
                if not v:
                    continue
                s = -coef if c.deg(c1) & 1 else coef
                for k, val in a.multiply(v, c2[0], {ai: 1}, rest).items():
                    _add(out, (c1, k), s * val, fld)
            if n:
                for coef, parts in c.deltan(cc, right=right):
                    vals = [alpha.value(p) for p in parts[1:]]
                    if not all(vals):
                        continue
                    e, seen = 0, c.deg(parts[0])
                    for p in parts[1:]:
                        e += seen
                        seen += c.deg(p)
                    prod, w = vals[0], parts[1][0]
                    for v, p in zip(vals[1:], parts[2:]):
                        prod = a.multiply(prod, w, v, p[0])
                        w += p[0]
                    prod = a.multiply(prod, w, {ai: 1}, rest)
                    s = -coef if e & 1 else coef
                    for k, val in prod.items():
                        _add(out, (parts[0], k), s * val, fld)
            return out
        _assemble(fld, m, _tensor_basis(c, a, m), image, cx)
        try:
            cx.check_square_zero(m)
        except StructuralError as exc:
            raise StructuralError(f"Maurer-Cartan failure: {exc}") from None
    return TwistedComplex(cx, max_weight)


def koszul_complex(a: NHomogPresentation, max_weight: int) -> TwistedComplex:
    """A^¡ ⊗ A built from normal forms of words.

    The basis of A^¡_j is dual to the normal words of A^∨_j, so the
    coefficient of c in a coproduct component b ⊗ w is the coefficient of c
    in the normal form of the concatenated word b·w.  Degrees: A^¡_{kN} ⊗ A
    sits in 2k and A^¡_{kN+1} ⊗ A in 2k + 1.
    """
    n = a.n
    qa = a.quotient()
    qd = dual_presentation(a).quotient()
    fld = a.field
    cx = WeightedComplex(fld)

    def cdim(j):
        return 1 if j == 0 else (qd.dim(j) if j % n in (0, 1) else 0)

    def cdeg(j):
        return 0 if j == 0 else dual_degree(n, j)

    def left(word, ai, rest):
        # word · basis[rest][ai] in A, via the normal form of the concatenation
        return qa.word_class(tuple(word) + qa.basis[rest][ai]) if qa.dim(rest) else {}

    coprod: dict[int, dict] = {}

    def components(j):
        # ci -> [(bi, tail, coef)] read off the normal forms of b·tail
        got = coprod.get(j)
        if got is None:
            got = {}
            tail_len = 1 if j % n == 1 else n - 1
            jb = j - tail_len
            for bi in range(cdim(jb)):
                bw = qd.basis[jb][bi] if jb else ()
                for tail in itertools.product(range(a.v_dim), repeat=tail_len):
                    for ci, coef in qd.word_class(bw + tail).items():
                        got.setdefault(ci, []).append((bi, tail, coef))
            coprod[j] = got
        return got

    for m in range(max_weight + 1):
        comps: dict[int, list] = {}
        for j in range(m + 1):
            for ci in range(cdim(j)):
                for ai in range(qa.dim(m - j)):
                    comps.setdefault(cdeg(j), []).append(((j, ci), ai))

        def image(x):
            (j, ci), ai = x
            out: dict = {}
            if j == 0:
                return out
            for bi, tail, coef in components(j).get(ci, ()):
                jb = j - len(tail)
                for k, val in left(tail, ai, m - j).items():
                    _add(out, ((jb, bi), k), coef * val, fld)
            return out
        _assemble(fld, m, comps, image, cx)
        cx.check_square_zero(m)
    return TwistedComplex(cx, max_weight)


@dataclass
class KoszulVerdict:
    koszul: bool
    max_weight: int
    witness: tuple[int, int, int] | None = None  # (weight, degree, homology dim)
    homology: dict[int, dict[int, int]] = dc_field(default_factory=dict)

    @property
    def label(self) -> str:
        return "koszul-up-to-bound" if self.koszul else "not-koszul"


def is_n_koszul(a: NHomogPresentation, max_weight: int, stop_early: bool = False) -> KoszulVerdict:
    """Acyclicity of the Koszul complex in positive degrees, weight by weight."""
    kc = koszul_complex(a, max_weight)
    hom = {}
    witness = None
    for m in range(max_weight + 1):
        hom[m] = kc.homology(m)
        bad = [(h, d) for h, d in sorted(hom[m].items()) if h > 0 and d]
        if bad and witness is None:
            witness = (m, bad[0][0], bad[0][1])
            if stop_early:
                break
    return KoszulVerdict(witness is None, max_weight, witness, hom)


# bar construction -------------------------------------------------------------

def compositions(m: int) -> Iterator[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in compositions(m - first):
            yield (first,) + rest


class BarCoalgebra:
    """BA = T^c(sĀ) with deconcatenation and the bar differential.

    Elements are (weight, ((m_1, i_1), .., (m_s, i_s))) in syzygy degree s;
    the summand multiplying positions (i, i+1) carries (-1)^{i-1}.
    """

    n = None

    def __init__(self, a: TensorQuotient, max_weight: int):
        self.a = a
        self.field = a.field
        self.max_weight = max_weight
        self._elements: dict[int, list] = {}

    def elements(self, m: int) -> list:
        got = self._elements.get(m)
        if got is None:
            got = []
            for comp in compositions(m):
                ranges = [range(self.a.dim(w)) for w in comp]
                for idxs in itertools.product(*ranges):
                    got.append((m, tuple(zip(comp, idxs))))
            self._elements[m] = got
        return got

    def deg(self, c) -> int:
        return len(c[1])

    def delta2(self, c, reduced: bool = False, right=None) -> list:
        m, word = c
        out = []
        for i in range(len(word) + 1):
            lw, rw = word[:i], word[i:]
            wr = sum(p[0] for p in rw)
            if right is not None and wr not in right:
                continue
            if reduced and (not lw or not rw):
                continue
            out.append((1, ((m - wr, lw), (wr, rw))))
        return out

    def deltan(self, c, right=None) -> list:
        return []

    def d(self, c) -> list:
        m, word = c
        out = []
        for i in range(len(word) - 1):
            (w1, i1), (w2, i2) = word[i], word[i + 1]
            sign = -1 if i & 1 else 1
            for k, v in self.a.prod_basis(w1, i1, w2, i2).items():
                out.append((sign * v, (m, word[:i] + ((w1 + w2, k),) + word[i + 2:])))
        return out


def bar_pi(bar: BarCoalgebra) -> TwistingMorphism:
    """π: BA -> A, [β] ↦ β and zero on longer words."""
    comps = {}
    for m in range(1, bar.max_weight + 1):
        for i in range(bar.a.dim(m)):
            comps[(m, ((m, i),))] = {i: 1}
    return TwistingMorphism(bar, bar.a, comps)


@dataclass
class BarComplex:
    complex: WeightedComplex
    ext_dims: dict[int, dict[int, int]]


def bar_construction(a: NHomogPresentation, max_weight: int) -> BarComplex:
    """Bar complex per weight; Ext^s_m = H_s (dual cohomology has the same dims)."""
    bar = BarCoalgebra(a.quotient(), max_weight)
    fld = a.field
    cx = WeightedComplex(fld)
    ext = {}
    for m in range(max_weight + 1):
        comps: dict[int, list] = {}
        for c in bar.elements(m):
            comps.setdefault(bar.deg(c), []).append(c)

        def image(c):
            out: dict = {}
            for coef, c2 in bar.d(c):
                _add(out, c2, coef, fld)
            return out
        _assemble(fld, m, comps, image, cx)
        ext[m] = {h: d for h, d in homology_dims(cx, m).items() if d}
    return BarComplex(cx, ext)


def expected_ext_dims(a: NHomogPresentation, max_weight: int) -> dict[int, dict[int, int]]:
    """A^! dims arranged by cohomological degree: Ext^{2k} at weight kN, Ext^{2k+1} at kN + 1."""
    qd = dual_presentation(a).quotient()
    out = {}
    for m in range(max_weight + 1):
        if m == 0:
            out[m] = {0: 1}
        elif m % a.n in (0, 1) and qd.dim(m):
            out[m] = {dual_degree(a.n, m): qd.dim(m)}
        else:
            out[m] = {}
    return out


@dataclass
class YonedaReport:
    match: bool
    ext: dict
    expected: dict
    mismatches: list


def check_yoneda_dims(a: NHomogPresentation, max_weight: int) -> YonedaReport:
    ext = bar_construction(a, max_weight).ext_dims
    exp = expected_ext_dims(a, max_weight)
    bad = [m for m in range(max_weight + 1) if ext.get(m, {}) != exp[m]]
    return YonedaReport(not bad, ext, exp, bad)


# cobar construction -------------------------------------------------------------

@dataclass
class CobarComplex:
    complex: WeightedComplex
    homology: dict[int, dict[int, int]]

    def concentrated(self, dims_a: Sequence[int]) -> bool:
        """Homology only in degree 0, with dim H_0 at weight m equal to dims_a[m]."""
        for m, hm in self.homology.items():
            if m == 0:
                continue
            if any(d for h, d in hm.items() if h != 0) or hm.get(0, 0) != dims_a[m]:
                return False
        return True


def cobar_complex(c: KoszulDualCoalgebra, max_weight: int) -> CobarComplex:
    """T(s^{-1}C̄) with the derivation extending the desuspended δ2 and δN.

    On cogenerators d(s^{-1}x) = -Σ (-1)^{|x1|} s^{-1}x1 s^{-1}x2
    - Σ (-1)^{Σ_i (N-i)|x_i|} s^{-1}x1 .. s^{-1}xN; extended by the Leibniz rule.
    Raises StructuralError when d² ≠ 0.
    """
    fld = c.field
    n = c.n
    cx = WeightedComplex(fld)
    gens = {w: c.basis(w) for w in c.weights[1:] if w <= max_weight}

    def words(m):
        for comp in compositions(m):
            if all(w in gens and gens[w] for w in comp):
                yield from itertools.product(*(gens[w] for w in comp))

    def sdeg(x):
        return c.deg(x) - 1

    cache: dict = {}

    def d_gen(x):
        got = cache.get(x)
        if got is None:
            got = {}
            for coef, (x1, x2) in c.delta2(x, reduced=True):
                s = coef if c.deg(x1) & 1 else -coef
                _add(got, (x1, x2), s, fld)
            for coef, parts in c.deltan(x):
                e = sum((n - i) * c.deg(p) for i, p in enumerate(parts, 1))
                _add(got, tuple(parts), coef if e & 1 else -coef, fld)
            cache[x] = got
        return got

    hom = {}
    for m in range(max_weight + 1):
        comps: dict[int, list] = {}
        for w in words(m):
            comps.setdefault(sum(sdeg(x) for x in w), []).append(w)

        def image(w):
            out: dict = {}
            pre = 0
            for i, x in enumerate(w):
                sign = -1 if pre & 1 else 1
                for sub, coef in d_gen(x).items():
                    _add(out, w[:i] + sub + w[i + 1:], sign * coef, fld)
                pre += sdeg(x)
            return out
        _assemble(fld, m, comps, image, cx)
        try:
            hom[m] = homology_dims(cx, m)
        except StructuralError as exc:
            raise StructuralError(f"coalgebra relations fail: {exc}") from None
    return CobarComplex(cx, hom)


# F2 search ----------------------------------------------------------------------

def rref_subspaces(ncols: int, dim: int, field: Field) -> Iterator[ExactMatrix]:
    """All dim-dimensional subspaces of field^ncols, as RREF matrices, in a fixed order."""
    p = field.p if hasattr(field, "p") else None
    if p is None:
        raise ValueError("subspace enumeration needs a finite field")
    for pivots in itertools.combinations(range(ncols), dim):
        free = [(r, col) for r, pc in enumerate(pivots) for col in range(pc + 1, ncols)
                if col not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [{pc: 1} for pc in pivots]
            for (r, col), v in zip(free, vals):
                if v:
                    rows[r][col] = v
            yield ExactMatrix.raw(dim, ncols, rows, field)


@dataclass
class SearchResult:
    presentation: NHomogPresentation | None
    verdict: KoszulVerdict | None
    examined: int


def search_non_koszul(v_dim: int = 2, n: int = 3, max_dim_r: int = 3, max_weight: int = 9,
                      field: Field | None = None) -> SearchResult:
    """First presentation (dim R ascending, RREF order) whose Koszul complex has
    positive-degree homology at some weight <= max_weight."""
    field = field or GF(2)
    examined = 0
    for dr in range(1, max_dim_r + 1):
        for rel in rref_subspaces(v_dim ** n, dr, field):
            examined += 1
            a = NHomogPresentation(n, v_dim, rel, field)
            verdict = is_n_koszul(a, max_weight, stop_early=True)
            if not verdict.koszul:
                return SearchResult(a, verdict, examined)
    return SearchResult(None, None, examined)
