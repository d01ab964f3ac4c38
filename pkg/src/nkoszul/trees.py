"""Tree monomials of a free non-symmetric operad.

A tree is a hash-consed node: a generator plus a tuple of children, where a
child is either another tree or ``None`` (an open input slot).  Equality is
object identity.  The identity operation is the special tree ``IDENTITY``.

Sign convention: a tree monomial stands for the composite of its vertex
labels taken in preorder.  Grafting ``T`` into slot ``i`` of ``S`` moves the
block of T's vertices past the vertices of S that come after slot ``i`` in
preorder, which costs ``(-1)^(|T| * |those vertices|)``.
"""
from __future__ import annotations

import random
from typing import Iterable, Iterator, NamedTuple, Sequence

from .linalg import QQ, Field


class Generator(NamedTuple):
    name: str
    arity: int
    degree: int = 0
    weight: int = 1
    constant: bool = False

    def __repr__(self):
        return self.name


class GeneratorSet:
    """An ordered alphabet; declaration order is the default ranking (first = largest)."""

    def __init__(self, gens: Iterable[Generator | tuple]):
        self.gens: tuple[Generator, ...] = tuple(
            g if isinstance(g, Generator) else Generator(*g) for g in gens)
        self.by_name = {}
        for g in self.gens:
            if g.name in self.by_name:
                raise ValueError(f"duplicate generator name {g.name!r}")
            if g.arity < 0:
                raise ValueError(f"negative arity for {g.name!r}")
            if g.weight < 0:
                raise ValueError(f"negative weight for {g.name!r}")
            if g.weight == 0 and g.arity <= 1:
                raise ValueError(f"generator {g.name!r} of arity {g.arity} needs positive weight")
            self.by_name[g.name] = g

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __getitem__(self, name: str) -> Generator:
        return self.by_name[name]

    def __contains__(self, name) -> bool:
        return name in self.by_name

    def __add__(self, other: "GeneratorSet") -> "GeneratorSet":
        return GeneratorSet(self.gens + tuple(other))

    def __eq__(self, other):
        return isinstance(other, GeneratorSet) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return "GeneratorSet(" + ", ".join(f"{g.name}/{g.arity}" for g in self.gens) + ")"


_INTERN: dict = {}


class Tree:
    __slots__ = ("gen", "children", "arity", "weight", "degree", "nverts", "leaves",
                 "labels", "_hash", "__weakref__")

    def __new__(cls, gen: Generator | None, children: tuple = ()):
        key = (gen, children)
        t = _INTERN.get(key)
        if t is not None:
            return t
        if gen is not None and len(children) != gen.arity:
            raise ValueError(f"{gen.name} expects {gen.arity} children, got {len(children)}")
        t = object.__new__(cls)
        t.gen = gen
        t.children = children
        if gen is None:
            t.arity, t.weight, t.degree, t.nverts, t.leaves = 1, 0, 0, 0, 1
            t.labels = frozenset()
        else:
            ar = 0
            w = gen.weight
            d = gen.degree
            nv = 1
            lv = 0 if gen.arity else 1
            labels = {gen}
            for c in children:
                if c is None:
                    ar += 1
                    lv += 1
                else:
                    ar += c.arity
                    w += c.weight
                    d += c.degree
                    nv += c.nverts
                    lv += c.leaves
                    labels |= c.labels
            t.arity, t.weight, t.degree, t.nverts, t.leaves = ar, w, d, nv, lv
            t.labels = frozenset(labels)
        t._hash = hash((id(gen), tuple(id(c) for c in children)))
        _INTERN[key] = t
        return t

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __reduce__(self):
        return (Tree, (self.gen, self.children))

    @property
    def is_identity(self) -> bool:
        return self.gen is None

    def preorder(self) -> tuple:
        """Canonical encoding: labels in preorder with ``None`` for open slots."""
        if self.gen is None:
            return (None,)
        out = []

        def walk(t):
            out.append(t.gen)
            for c in t.children:
                if c is None:
                    out.append(None)
                else:
                    walk(c)
        walk(self)
        return tuple(out)

    def vertices(self) -> list[tuple[tuple[int, ...], "Tree"]]:
        """(path, subtree) for every labelled vertex in preorder."""
        out = []

        def walk(t, path):
            out.append((path, t))
            for k, c in enumerate(t.children):
                if c is not None:
                    walk(c, path + (k,))
        if self.gen is not None:
            walk(self, ())
        return out

    def subtree(self, path: Sequence[int]) -> "Tree":
        t = self
        for k in path:
            t = t.children[k]
        return t

    def __repr__(self):
        return to_text(self)

    def __lt__(self, other):  # only so that sorted() on ties never fails
        return self.preorder_names() < other.preorder_names()

    def preorder_names(self) -> tuple:
        return tuple("" if g is None else g.name for g in self.preorder())


IDENTITY = Tree(None, ())


def corolla(g: Generator) -> Tree:
    return Tree(g, (None,) * g.arity)


def leaf_constant(g: Generator) -> Tree:
    if g.arity:
        raise ValueError(f"{g.name} is not 0-ary")
    return Tree(g, ())


def to_text(t: Tree) -> str:
    """Render with the composition syntax; the rendering always has sign +1."""
    if t.gen is None:
        return "id"
    s = t.gen.name
    slot = 1
    for c in t.children:
        if c is None:
            slot += 1
            continue
        s += f".{slot}({to_text(c)})"
        slot += c.arity
    return s


def encode(t: Tree) -> list:
    return [None if g is None else g.name for g in t.preorder()]


def decode(code: Sequence, gens: GeneratorSet) -> Tree:
    code = list(code)
    if code == [None]:
        return IDENTITY
    pos = 0

    def build():
        nonlocal pos
        if pos >= len(code):
            raise ValueError("truncated encoding")
        item = code[pos]
        pos += 1
        if item is None:
            return None
        g = gens[item]
        return Tree(g, tuple(build() for _ in range(g.arity)))
    t = build()
    if pos != len(code) or t is None:
        raise ValueError("malformed encoding")
    return t


# composition ----------------------------------------------------------------

def _graft(node: Tree, k: int, t: Tree) -> tuple[Tree, int]:
    """Put t into the k-th (0-based) open slot below node.

    Returns the new tree and the total degree of the vertices of node that
    precede the slot in preorder.
    """
    before = node.gen.degree
    kids = list(node.children)
    for idx, c in enumerate(kids):
        if c is None:
            if k == 0:
                kids[idx] = t
                return Tree(node.gen, tuple(kids)), before
            k -= 1
        else:
            if k < c.arity:
                new, b = _graft(c, k, t)
                kids[idx] = new
                return Tree(node.gen, tuple(kids)), before + b
            k -= c.arity
            before += c.degree
    raise IndexError("slot out of range")


def partial_compose(s: Tree, i: int, t: Tree) -> tuple[int, Tree]:
    """s ∘_i t with its Koszul sign relative to the canonical monomial."""
    if not 1 <= i <= s.arity:
        raise IndexError(f"slot {i} out of range for arity {s.arity}")
    if s.gen is None:
        return 1, t
    if t.gen is None:
        return 1, s
    new, before = _graft(s, i - 1, t)
    after = s.degree - before
    return (-1 if (t.degree * after) & 1 else 1), new


def graded_assoc_sides(alpha: Tree, beta: Tree, gamma: Tree, i: int, j: int):
    """Both sides of the graded associativity identity for (α ∘_i β) ∘_j γ."""
    m = beta.arity
    r = gamma.arity
    if not 1 <= i <= alpha.arity:
        raise ValueError("slot i out of range")
    if not 1 <= j <= alpha.arity + m - 1:
        raise ValueError("slot j out of range")
    s1, ab = partial_compose(alpha, i, beta)
    s2, lhs = partial_compose(ab, j, gamma)
    left = (s1 * s2, lhs)
    if j <= i - 1:
        s3, ag = partial_compose(alpha, j, gamma)
        s4, rhs = partial_compose(ag, i + r - 1, beta)
        sign = -1 if (beta.degree * gamma.degree) & 1 else 1
        right = (sign * s3 * s4, rhs)
    elif j <= i + m - 1:
        s3, bg = partial_compose(beta, j - i + 1, gamma)
        s4, rhs = partial_compose(alpha, i, bg)
        right = (s3 * s4, rhs)
    else:
        s3, ag = partial_compose(alpha, j - m + 1, gamma)
        s4, rhs = partial_compose(ag, i, beta)
        sign = -1 if (beta.degree * gamma.degree) & 1 else 1
        right = (sign * s3 * s4, rhs)
    return left, right


def check_graded_associativity(alpha: Tree, beta: Tree, gamma: Tree, i: int, j: int) -> bool:
    left, right = graded_assoc_sides(alpha, beta, gamma, i, j)
    return left[0] == right[0] and left[1] is right[1]


def plug(t: Tree, fillers: Sequence[Tree | None]) -> tuple[int, Tree]:
    """Fill the open slots of t (left to right) with fillers; None keeps a slot.

    The sign is that of moving each filler block past the vertices of t that
    follow its slot in preorder.
    """
    if len(fillers) != t.arity:
        raise ValueError("filler count does not match arity")
    if t.gen is None:
        f = fillers[0]
        return 1, (IDENTITY if f is None else f)
    it = iter(fillers)
    exp = 0

    def walk(node: Tree, before: int) -> tuple[Tree, int]:
        nonlocal exp
        total_before = before + node.gen.degree
        kids = []
        for c in node.children:
            if c is None:
                f = next(it)
                if f is not None and f.degree & 1:
                    exp += t.degree - total_before
                kids.append(f)
            else:
                nc, total_before = walk(c, total_before)
                kids.append(nc)
        return Tree(node.gen, tuple(kids)), total_before
    new, _ = walk(t, 0)
    return (-1 if exp & 1 else 1), new


# divisibility -----------------------------------------------------------------

class Embedding(NamedTuple):
    """An occurrence of ``divisor`` in a host rooted at ``path``.

    ``below`` lists what hangs under the divisor's open slots (subtree or
    None), in slot order.
    """
    path: tuple[int, ...]
    divisor: Tree
    below: tuple

    def vertex_paths(self) -> frozenset:
        out = set()

        def walk(t, p):
            out.add(p)
            for k, c in enumerate(t.children):
                if c is not None:
                    walk(c, p + (k,))
        if self.divisor.gen is not None:
            walk(self.divisor, self.path)
        return frozenset(out)


def _match(host: Tree, pat: Tree, below: list) -> bool:
    if host.gen is not pat.gen and host.gen != pat.gen:
        return False
    for hc, pc in zip(host.children, pat.children):
        if pc is None:
            below.append(hc)
        elif hc is None or not _match(hc, pc, below):
            return False
    return True


def match_at(host: Tree, pat: Tree) -> tuple | None:
    below: list = []
    if _match(host, pat, below):
        return tuple(below)
    return None


def find_divisors(s: Tree, t: Tree) -> list[Embedding]:
    """All embeddings of t into s, ordered by the preorder position of the root."""
    if t.gen is None:
        # the identity divides everything at every slot; not used as a divisor
        return []
    if not t.labels <= s.labels or t.nverts > s.nverts:
        return []
    out = []
    for path, sub in s.vertices():
        if sub.gen == t.gen and sub.nverts >= t.nverts:
            b = match_at(sub, t)
            if b is not None:
                out.append(Embedding(path, t, b))
    return out


def is_divisible(s: Tree, t: Tree) -> bool:
    if t.gen is None or not t.labels <= s.labels or t.nverts > s.nverts:
        return False
    for _, sub in s.vertices():
        if sub.gen == t.gen and match_at(sub, t) is not None:
            return True
    return False


def _replace_at(s: Tree, path: Sequence[int], new: Tree) -> tuple[Tree, int]:
    """Replace the subtree at path; also return the degree of vertices before it."""
    if not path:
        return new, 0
    k = path[0]
    before = s.gen.degree
    for c in s.children[:k]:
        if c is not None:
            before += c.degree
    sub, b = _replace_at(s.children[k], path[1:], new)
    kids = list(s.children)
    kids[k] = sub
    return Tree(s.gen, tuple(kids)), before + b


def substitute_monomial(s: Tree, e: Embedding, t2: Tree) -> tuple[int, Tree]:
    """Replace the occurrence e of its divisor in s by the monomial t2."""
    if t2.arity != e.divisor.arity:
        raise ValueError("arity mismatch in substitution")
    old_sign, old_sub = plug(e.divisor, e.below)
    new_sign, new_sub = plug(t2, e.below)
    x = s.subtree(e.path)
    if old_sub is not x:
        raise ValueError("embedding does not match host")
    result, before = _replace_at(s, e.path, new_sub)
    after = s.degree - before - x.degree
    sign = old_sign * new_sign
    if ((e.divisor.degree + t2.degree) * after) & 1:
        sign = -sign
    return sign, result


# elements -------------------------------------------------------------------------

class OperadElement:
    """Finite linear combination of tree monomials of a single arity."""

    __slots__ = ("terms", "field", "arity")

    def __init__(self, terms: dict | None = None, field: Field = QQ, arity: int | None = None):
        self.field = field
        clean = {}
        if terms:
            for t, c in terms.items():
                c = field(c)
                if c != 0:
                    clean[t] = c
        ar = {t.arity for t in clean}
        if len(ar) > 1:
            raise ValueError(f"mixed arities {sorted(ar)} in one element")
        if arity is not None and ar and ar != {arity}:
            raise ValueError("terms do not have the stated arity")
        self.arity = arity if arity is not None else (ar.pop() if ar else None)
        self.terms = clean

    @classmethod
    def monomial(cls, t: Tree, coef=1, field: Field = QQ) -> "OperadElement":
        return cls({t: coef}, field)

    @classmethod
    def _raw(cls, terms: dict, field: Field, arity) -> "OperadElement":
        e = cls.__new__(cls)
        e.terms, e.field, e.arity = terms, field, arity
        return e

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _combine(self, other: "OperadElement", a) -> "OperadElement":
        if self.arity is not None and other.arity is not None and self.arity != other.arity:
            raise ValueError("cannot add elements of different arities")
        fld = self.field
        out = dict(self.terms)
        for t, c in other.terms.items():
            s = fld.norm(out.get(t, 0) + a * c)
            if s == 0:
                out.pop(t, None)
            else:
                out[t] = s
        ar = self.arity if self.arity is not None else other.arity
        return OperadElement._raw(out, fld, ar)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a) -> "OperadElement":
        fld = self.field
        a = fld(a)
        if a == 0:
            return OperadElement._raw({}, fld, self.arity)
        return OperadElement._raw({t: fld.norm(a * c) for t, c in self.terms.items()},
                                  fld, self.arity)

    def __rmul__(self, a):
        return self.scale(a)

    def degrees(self) -> set[int]:
        return {t.degree for t in self.terms}

    def weights(self) -> set[int]:
        return {t.weight for t in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1 and len(self.weights()) <= 1

    def __repr__(self):
        if not self.terms:
            return "0"
        return element_to_text(self)


def element_to_text(f: OperadElement) -> str:
    parts = []
    for t, c in sorted(f.terms.items(), key=lambda tc: tc[0].preorder_names()):
        cs = str(c)
        if cs.startswith("-"):
            sign, mag = "-", cs[1:]
        else:
            sign, mag = "+", cs
        body = to_text(t) if mag == "1" else f"{mag} {to_text(t)}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def compose(f: OperadElement | Tree, i: int, g: OperadElement | Tree,
            field: Field = QQ) -> OperadElement:
    """Bilinear extension of partial_compose."""
    if isinstance(f, Tree):
        f = OperadElement.monomial(f, 1, field)
    if isinstance(g, Tree):
        g = OperadElement.monomial(g, 1, field)
    fld = f.field
    out: dict = {}
    for s, a in f.terms.items():
        for t, b in g.terms.items():
            sign, u = partial_compose(s, i, t)
            c = fld.norm(out.get(u, 0) + sign * a * b)
            if c == 0:
                out.pop(u, None)
            else:
                out[u] = c
    ar = None if f.arity is None or g.arity is None else f.arity + g.arity - 1
    return OperadElement._raw(out, fld, ar)


def substitute(s: Tree, e: Embedding, g: OperadElement) -> OperadElement:
    """m_{S,T}(g): replace the occurrence e of T = e.divisor in s by g."""
    if g.arity is not None and g.arity != e.divisor.arity:
        raise ValueError(f"arity mismatch: element has arity {g.arity}, divisor {e.divisor.arity}")
    fld = g.field
    out: dict = {}
    for t2, c in g.terms.items():
        sign, u = substitute_monomial(s, e, t2)
        v = fld.norm(out.get(u, 0) + sign * c)
        if v == 0:
            out.pop(u, None)
        else:
            out[u] = v
    return OperadElement._raw(out, fld, s.arity)


# enumeration ----------------------------------------------------------------------

class _Enumerator:
    """Memoized generation of trees by (arity, exact weight), with an optional filter."""

    def __init__(self, gens: Iterable[Generator], keep=None):
        self.gens = tuple(gens)
        for g in self.gens:
            if g.weight == 0 and g.arity <= 1:
                raise ValueError(f"generator {g.name} must have positive weight")
        self.keep = keep
        self.memo: dict[tuple[int, int], list[Tree]] = {}

    def trees(self, n: int, w: int) -> list[Tree]:
        key = (n, w)
        got = self.memo.get(key)
        if got is not None:
            return got
        self.memo[key] = []  # guards against accidental cycles
        out: list[Tree] = []
        if n == 1 and w == 0:
            out.append(IDENTITY)
        for g in self.gens:
            if g.weight > w:
                continue
            rest = w - g.weight
            if g.arity == 0:
                if n == 0 and rest == 0:
                    t = Tree(g, ())
                    if self.keep is None or self.keep(t):
                        out.append(t)
                continue
            for kids in self._children(g.arity, n, rest, n + w):
                t = Tree(g, kids)
                if self.keep is None or self.keep(t):
                    out.append(t)
        self.memo[key] = out
        return out

    def _options(self, a: int, b: int) -> list:
        if (a, b) == (1, 0):
            return [None]
        return [t for t in self.trees(a, b) if t.gen is not None]

    def _children(self, k: int, n: int, w: int, parent_size: int):
        # each child has size arity+weight >= 1 and < parent_size
        if k == 0:
            if n == 0 and w == 0:
                yield ()
            return
        for a in range(n + 1):
            for b in range(w + 1):
                if a + b == 0 or a + b >= parent_size:
                    continue
                # remaining k-1 children need at least size k-1
                if (n - a) + (w - b) < k - 1:
                    continue
                opts = self._options(a, b)
                if not opts:
                    continue
                for tail in self._children(k - 1, n - a, w - b, parent_size):
                    for o in opts:
                        yield (o,) + tail


def enumerate_tree_monomials(gens: Iterable[Generator], arity: int, max_weight: int,
                             order=None, keep=None) -> list[Tree]:
    """All tree monomials of the arity with weight <= max_weight, sorted by order."""
    en = _Enumerator(gens, keep)
    out = []
    for w in range(max_weight + 1):
        out.extend(en.trees(arity, w))
    if order is None:
        from .ordering import PathLexOrder
        order = PathLexOrder(tuple(gens))
    out.sort(key=order.key)
    return out


def random_tree(gens: Sequence[Generator], rng: random.Random, max_vertices: int,
                allow_identity: bool = False) -> Tree:
    """Random tree with at most max_vertices labelled vertices."""
    if allow_identity and rng.random() < 0.05:
        return IDENTITY
    budget = [max(1, max_vertices)]

    def grow() -> Tree:
        budget[0] -= 1
        g = rng.choice(gens)
        kids = []
        for _ in range(g.arity):
            if budget[0] > 0 and rng.random() < 0.45:
                kids.append(grow())
            else:
                kids.append(None)
        return Tree(g, tuple(kids))
    return grow()
