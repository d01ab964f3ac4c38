"""Exact linear algebra over Q and over prime fields.

Matrices are stored as lists of sparse rows (dicts column -> nonzero entry).
Row reduction keeps the pivot rows in reduced echelon form at all times, so
reducing a new row needs a single pass over its pivot columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence


class StructuralError(ArithmeticError):
    """Raised when an algebraic identity that must hold exactly fails."""


class Field:
    """Base class of exact fields. Elements are plain Python numbers."""

    characteristic = 0
    name = "?"

    def __call__(self, x):
        raise NotImplementedError

    def norm(self, x):
        return x

    def inv(self, x):
        raise NotImplementedError

    def div(self, a, b):
        return self.norm(a * self.inv(b))

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"<field {self.name}>"


class RationalField(Field):
    characteristic = 0
    name = "q"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, int):
            return x
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into Q")

    def norm(self, x):
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.norm(Fraction(1) / x)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.p = p
        self.name = f"f{p}"

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def norm(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)


QQ = RationalField()
_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_from_name(name: str) -> Field:
    """Parse ``q``, ``f2``, ``f7``... into a field."""
    name = name.strip().lower()
    if name in ("q", "qq", "rational", "rationals"):
        return QQ
    if name.startswith("f") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise ValueError(f"unknown field {name!r}")


# sparse vectors -----------------------------------------------------------

def vec_axpy(y: dict, a, x: dict, fld: Field) -> None:
    """y += a*x in place, dropping zeros."""
    if a == 0:
        return
    for k, v in x.items():
        s = fld.norm(y.get(k, 0) + a * v)
        if s == 0:
            y.pop(k, None)
        else:
            y[k] = s


def vec_scale(x: dict, a, fld: Field) -> dict:
    if a == 0:
        return {}
    return {k: fld.norm(a * v) for k, v in x.items()}


class ExactMatrix:
    """Sparse exact matrix; ``rows[i]`` maps column index to a nonzero entry."""

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[dict] | None = None,
                 field: Field = QQ):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        clean = []
        for r in rows:
            d = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} out of range")
                v = field(v)
                if v != 0:
                    d[c] = v
            clean.append(d)
        self.rows = clean

    @classmethod
    def raw(cls, nrows: int, ncols: int, rows: list[dict], field: Field = QQ) -> "ExactMatrix":
        """Wrap already-normalized sparse rows without copying or checking."""
        m = cls.__new__(cls)
        m.nrows, m.ncols, m.rows, m.field = nrows, ncols, rows, field
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], field: Field = QQ,
                   ncols: int | None = None) -> "ExactMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
            rows.append({j: field(v) for j, v in enumerate(r) if v != 0})
        return cls(len(rows), ncols, rows, field)

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "ExactMatrix":
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return ExactMatrix(self.ncols, self.nrows, cols, self.field)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc: dict = {}
            for k, v in r.items():
                vec_axpy(acc, v, other.rows[k], self.field)
            out.append(acc)
        return ExactMatrix(self.nrows, other.ncols, out, self.field)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, {self.field.name})"


@dataclass(frozen=True)
class RowReduction:
    rank: int
    row_basis: ExactMatrix
    kernel_basis: ExactMatrix
    pivots: tuple[int, ...]


class Echelon:
    """Incremental reduced echelon form.

    Pivot of a row is its lowest column.  ``add`` returns the reduced residue
    of the inserted row (empty when it was dependent).
    """

    def __init__(self, ncols: int, field: Field = QQ):
        self.ncols = ncols
        self.field = field
        self.piv: dict[int, dict] = {}
        # column -> pivots whose row has a nonzero entry there
        self._col_users: dict[int, set[int]] = {}

    def reduce(self, row: dict) -> dict:
        fld = self.field
        r = dict(row)
        for c in [c for c in r if c in self.piv]:
            a = r.get(c, 0)
            if a:
                vec_axpy(r, fld.norm(-a), self.piv[c], fld)
        return r

    def add(self, row: dict) -> dict:
        fld = self.field
        r = self.reduce(row)
        if not r:
            return r
        p = min(r)
        inv = fld.inv(r[p])
        if inv != 1:
            r = vec_scale(r, inv, fld)
        # clear column p from older pivot rows
        for q in list(self._col_users.get(p, ())):
            prow = self.piv[q]
            a = prow.get(p, 0)
            if not a:
                continue
            old = set(prow)
            vec_axpy(prow, fld.norm(-a), r, fld)
            for c in old - set(prow):
                self._col_users.get(c, set()).discard(q)
            for c in set(prow) - old:
                self._col_users.setdefault(c, set()).add(q)
        self._col_users.pop(p, None)
        self.piv[p] = r
        for c in r:
            if c != p:
                self._col_users.setdefault(c, set()).add(p)
        return r

    @property
    def rank(self) -> int:
        return len(self.piv)

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)


def _rank_gf2(rows: Iterable[dict]) -> int:
    piv: dict[int, int] = {}
    for r in rows:
        x = 0
        for c, v in r.items():
            if v & 1:
                x |= 1 << c
        while x:
            low = x & -x
            q = piv.get(low)
            if q is None:
                piv[low] = x
                break
            x ^= q
    return len(piv)


def rank(m: ExactMatrix) -> int:
    if m.field.characteristic == 2:
        return _rank_gf2(m.rows)
    e = Echelon(m.ncols, m.field)
    for r in m.rows:
        e.add(r)
    return e.rank


def row_reduce(m: ExactMatrix) -> RowReduction:
    e = Echelon(m.ncols, m.field)
    for r in m.rows:
        e.add(r)
    pivots = tuple(sorted(e.piv))
    basis = ExactMatrix(len(pivots), m.ncols, [e.piv[p] for p in pivots], m.field)
    fld = m.field
    pivset = set(pivots)
    kernel = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = {f: 1}
        for p in pivots:
            a = e.piv[p].get(f, 0)
            if a:
                v[p] = fld.norm(-a)
        kernel.append(v)
    kb = ExactMatrix(len(kernel), m.ncols, kernel, fld)
    return RowReduction(len(pivots), basis, kb, pivots)


def annihilator(subspace: ExactMatrix, ambient_dim: int) -> ExactMatrix:
    """Basis of the annihilator of the row space under the dot-product pairing."""
    if subspace.ncols != ambient_dim:
        raise ValueError(f"rows have length {subspace.ncols}, expected {ambient_dim}")
    return row_reduce(subspace).kernel_basis


# chain complexes -----------------------------------------------------------

@dataclass
class WeightedComplex:
    """Weight-graded chain complex.

    ``dims[m][h]`` is the dimension of the degree-h component in weight m and
    ``diffs[m][h]`` is d_h : C_h -> C_{h-1} written as a matrix whose row r is
    the image of the r-th basis vector of C_h.  Missing entries are zero maps.
    """

    field: Field = QQ
    dims: dict[int, dict[int, int]] = dc_field(default_factory=dict)
    diffs: dict[int, dict[int, ExactMatrix]] = dc_field(default_factory=dict)
    labels: dict[int, dict[int, list]] = dc_field(default_factory=dict)

    def weights(self) -> list[int]:
        return sorted(self.dims)

    def degrees(self, m: int) -> list[int]:
        return sorted(self.dims.get(m, {}))

    def differential(self, m: int, h: int) -> ExactMatrix:
        d = self.diffs.get(m, {}).get(h)
        if d is not None:
            return d
        dm = self.dims.get(m, {})
        return ExactMatrix(dm.get(h, 0), dm.get(h - 1, 0), None, self.field)

    def check_shapes(self, m: int) -> None:
        dm = self.dims.get(m, {})
        for h, d in self.diffs.get(m, {}).items():
            if d.nrows != dm.get(h, 0) or d.ncols != dm.get(h - 1, 0):
                raise StructuralError(f"weight {m}: d_{h} has shape {d.nrows}x{d.ncols}, "
                                      f"components are {dm.get(h, 0)} and {dm.get(h - 1, 0)}")

    def check_square_zero(self, m: int) -> None:
        self.check_shapes(m)
        for h in self.degrees(m):
            d1 = self.diffs.get(m, {}).get(h)
            d0 = self.diffs.get(m, {}).get(h - 1)
            if d1 is None or d0 is None:
                continue
            prod = d1 @ d0
            if not prod.is_zero():
                row = next(i for i, r in enumerate(prod.rows) if r)
                raise StructuralError(f"d∘d != 0 in weight {m}, degree {h} -> {h - 2} "
                                      f"(basis vector {row})")

    def euler_characteristic(self, m: int) -> int:
        return sum((-1) ** (h % 2) * n for h, n in self.dims.get(m, {}).items())


def homology_dims(c: WeightedComplex, weight: int) -> dict[int, int]:
    """dim H_h = dim C_h - rank d_h - rank d_{h+1}; verifies d∘d = 0 first."""
    c.check_square_zero(weight)
    dm = c.dims.get(weight, {})
    ranks = {h: rank(d) for h, d in c.diffs.get(weight, {}).items()}
    out = {}
    for h in sorted(dm):
        out[h] = dm[h] - ranks.get(h, 0) - ranks.get(h + 1, 0)
        if out[h] < 0:
            raise StructuralError(f"negative homology in weight {weight}, degree {h}")
    return out
