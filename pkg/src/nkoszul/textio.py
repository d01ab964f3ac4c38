"""Text format for presentations.

A file is a sequence of sections::

    [field]
    q

    [operad]
    gen m2 2 0            # name arity degree [weight]
    gen m3 3 -1
    rel m2.1(m2) - m2.2(m2)

    [constants]
    e1 1 1                # name weight [degree]

    [algebra-relations]
    m2.1(e1).1(e1)

    [order]
    m2 m3                 # greatest first

    [bounds]
    max-arity = 8

    [nhomog]
    n = 3
    generators = x y
    rel x*x*x + x*y*x

Expressions: ``term := coeff? monomial`` joined by ``+``/``-``, where
``monomial := gen | monomial "." slot "(" monomial ")"``.  Coefficients are
integers or fractions like ``-2/3``, optionally followed by ``*``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .linalg import QQ, Field, field_from_name
from .nhomog import NHomogPresentation, index_word
from .operad_algebra import AlgebraPresentation, OperadPresentation, extended_generators
from .trees import Generator, GeneratorSet, OperadElement, Tree, corolla, element_to_text, partial_compose

SECTIONS = ("field", "operad", "constants", "algebra-relations", "order", "bounds", "nhomog")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class ParsedFile:
    field: Field = QQ
    field_given: bool = False
    operad: OperadPresentation | None = None
    algebra: AlgebraPresentation | None = None
    nhomog: NHomogPresentation | None = None
    order: list[str] | None = None
    bounds: dict[str, int] = dc_field(default_factory=dict)


# expressions -----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_COEF = re.compile(r"\d+(?:/\d+)?")


class _Expr:
    def __init__(self, text: str, line: int, col0: int, table: dict[str, Generator], fld: Field):
        self.s = text
        self.pos = 0
        self.line = line
        self.col0 = col0
        self.table = table
        self.field = fld

    def error(self, msg: str, pos: int | None = None):
        p = self.pos if pos is None else pos
        raise ParseError(msg, self.line, self.col0 + p + 1)

    def skip(self):
        while self.pos < len(self.s) and self.s[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1

    def monomial(self) -> tuple[int, Tree]:
        self.skip()
        start = self.pos
        m = _NAME.match(self.s, self.pos)
        if not m:
            self.error("expected a generator name")
        name = m.group()
        if name not in self.table:
            self.error(f"unknown generator '{name}'", start)
        self.pos = m.end()
        sign, t = 1, corolla(self.table[name])
        while self.peek() == ".":
            self.pos += 1
            self.skip()
            spos = self.pos
            sm = re.compile(r"\d+").match(self.s, self.pos)
            if not sm:
                self.error("expected a slot number")
            slot = int(sm.group())
            self.pos = sm.end()
            self.expect("(")
            s2, sub = self.monomial()
            self.expect(")")
            if not 1 <= slot <= t.arity:
                self.error(f"slot {slot} out of range: arity is {t.arity}", spos)
            s3, t = partial_compose(t, slot, sub)
            sign *= s2 * s3
        return sign, t

    def element(self) -> OperadElement:
        terms: dict = {}
        fld = self.field
        arity = None
        first = True
        while True:
            ch = self.peek()
            if not ch:
                if first:
                    self.error("empty expression")
                break
            neg = False
            if ch in "+-":
                neg = ch == "-"
                self.pos += 1
            elif not first:
                self.error("expected '+' or '-'")
            self.skip()
            coef = Fraction(1)
            cm = _COEF.match(self.s, self.pos)
            if cm:
                coef = Fraction(cm.group())
                self.pos = cm.end()
                if self.peek() == "*":
                    self.pos += 1
            start = self.pos
            sign, t = self.monomial()
            if arity is None:
                arity = t.arity
            elif t.arity != arity:
                self.error(f"term has arity {t.arity}, expected {arity}", start)
            c = fld.norm(fld(-coef if neg else coef) * sign)
            v = fld.norm(terms.get(t, 0) + c)
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
            first = False
        return OperadElement(terms, fld, arity)


def parse_element(text: str, table: dict[str, Generator], fld: Field = QQ,
                  line: int = 1, col0: int = 0) -> OperadElement:
    return _Expr(text, line, col0, table, fld).element()


def _letters(chunk: str, idx: dict[str, int]) -> list[int] | None:
    if chunk in idx:
        return [idx[chunk]]
    parts = chunk.split("*")
    if all(p in idx for p in parts):
        return [idx[p] for p in parts]
    return None


def parse_word_relation(text: str, names: list[str], fld: Field, line: int, col0: int) -> dict:
    """``2 x*y*x - x x x`` -> {(0,1,0): 2, (0,0,0): -1}; letters split on spaces or ``*``."""
    out: dict = {}
    idx = {n: k for k, n in enumerate(names)}
    sign = None
    terms = 0
    for tm in re.finditer(r"[+-]|[^+-]+", text):
        tok = tm.group()
        if tok in ("+", "-"):
            if sign is not None:
                raise ParseError("two signs in a row", line, col0 + tm.start() + 1)
            sign = tok
            continue
        body = tok.strip()
        if not body:
            continue
        off = tm.start() + tok.index(body[0])
        coef = Fraction(1)
        m = re.match(r"(\d+(?:/\d+)?)\s*\*?\s*", body)
        if m:
            coef = Fraction(m.group(1))
            body = body[m.end():]
            off += m.end()
        word: list[int] = []
        for cm in re.finditer(r"\S+", body):
            got = _letters(cm.group(), idx)
            if got is None:
                raise ParseError(f"unknown generator in '{cm.group()}'", line, col0 + off + cm.start() + 1)
            word += got
        if not word:
            raise ParseError("term without a word", line, col0 + off + 1)
        w = tuple(word)
        v = fld.norm(out.get(w, 0) + fld(-coef if sign == "-" else coef))
        if v:
            out[w] = v
        else:
            out.pop(w, None)
        sign = None
        terms += 1
    if sign is not None:
        raise ParseError("dangling sign", line, col0 + len(text.rstrip()))
    if not terms:
        raise ParseError("empty relation", line, col0 + 1)
    return out


# files -----------------------------------------------------------------------

def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got '{tok}'", line, col) from None


def parse_presentation(text: str, field: Field | None = None) -> ParsedFile:
    """Parse a presentation file; ``field`` overrides its [field] section."""
    sections: dict[str, list[tuple[int, int, str]]] = {}
    current = None
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.strip()
        col = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", ln, col)
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", ln, col)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", ln, col)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section", ln, col)
        sections[current].append((ln, col, stripped))

    out = ParsedFile()
    if "field" in sections:
        lines = sections["field"]
        if len(lines) != 1:
            ln = lines[1][0] if lines else 1
            raise ParseError("[field] takes exactly one line", ln, 1)
        ln, col, s = lines[0]
        try:
            out.field = field_from_name(s)
        except ValueError as exc:
            raise ParseError(str(exc), ln, col) from None
        out.field_given = True
    if field is not None:
        out.field = field
    fld = out.field

    if "operad" in sections:
        gens, rel_lines = [], []
        for ln, col, s in sections["operad"]:
            toks = s.split()
            if toks[0] == "gen":
                if len(toks) not in (4, 5) or not _NAME.fullmatch(toks[1]):
                    raise ParseError("expected 'gen NAME ARITY DEGREE [WEIGHT]'", ln, col)
                ar = _int(toks[2], ln, col)
                if ar < 1:
                    raise ParseError("operations need arity >= 1", ln, col)
                deg = _int(toks[3], ln, col)
                w = _int(toks[4], ln, col) if len(toks) == 5 else 1
                gens.append(Generator(toks[1], ar, deg, w))
            elif toks[0] == "rel":
                rel_lines.append((ln, col + 2, s[3:]))
            else:
                raise ParseError(f"expected 'gen' or 'rel', got '{toks[0]}'", ln, col)
        try:
            gset = GeneratorSet(gens)
        except ValueError as exc:
            raise ParseError(str(exc), sections["operad"][0][0], 1) from None
        table = {g.name: g for g in gset}
        rels = [parse_element(body, table, fld, ln, col0) for ln, col0, body in rel_lines]
        try:
            out.operad = OperadPresentation(gset, rels, fld)
        except ValueError as exc:
            raise ParseError(str(exc), rel_lines[0][0] if rel_lines else 1, 1) from None

    if "constants" in sections or "algebra-relations" in sections:
        if out.operad is None:
            raise ParseError("algebra sections need an [operad] section", 1, 1)
        consts = []
        for ln, col, s in sections.get("constants", []):
            toks = s.split()
            if len(toks) not in (2, 3) or not _NAME.fullmatch(toks[0]):
                raise ParseError("expected 'NAME WEIGHT [DEGREE]'", ln, col)
            w = _int(toks[1], ln, col)
            d = _int(toks[2], ln, col) if len(toks) == 3 else 0
            consts.append(Generator(toks[0], 0, d, w, True))
        try:
            ext = extended_generators(out.operad, consts)
        except ValueError as exc:
            raise ParseError(str(exc), sections["constants"][0][0], 1) from None
        table = {g.name: g for g in ext}
        rels = []
        for ln, col, s in sections.get("algebra-relations", []):
            r = parse_element(s, table, fld, ln, col - 1)
            if r.arity not in (0, None):
                raise ParseError(f"algebra relation has arity {r.arity}, expected 0", ln, col)
            rels.append(r)
        try:
            out.algebra = AlgebraPresentation(out.operad, consts, rels)
        except ValueError as exc:
            raise ParseError(str(exc), 1, 1) from None

    if "order" in sections:
        names = []
        for ln, col, s in sections["order"]:
            names.extend(s.split())
        known = set()
        if out.operad:
            known |= {g.name for g in out.operad.gens}
        if out.algebra:
            known |= {c.name for c in out.algebra.constants}
        ln = sections["order"][0][0]
        missing = known - set(names)
        unknown = set(names) - known
        if unknown:
            raise ParseError(f"unknown generator(s) in [order]: {sorted(unknown)}", ln, 1)
        if missing:
            raise ParseError(f"[order] omits {sorted(missing)}", ln, 1)
        out.order = names

    if "bounds" in sections:
        for ln, col, s in sections["bounds"]:
            if "=" not in s:
                raise ParseError("expected 'key = value'", ln, col)
            k, v = (x.strip() for x in s.split("=", 1))
            if k not in ("max-arity", "max-weight", "max-size"):
                raise ParseError(f"unknown bound '{k}'", ln, col)
            out.bounds[k] = _int(v, ln, col)

    if "nhomog" in sections:
        n = None
        names = None
        rels = []
        for ln, col, s in sections["nhomog"]:
            if s.startswith("rel"):
                rels.append((ln, col + 2, s[3:]))
                continue
            if "=" not in s:
                raise ParseError("expected 'n = N', 'generators = ...' or 'rel ...'", ln, col)
            k, v = (x.strip() for x in s.split("=", 1))
            if k == "n":
                n = _int(v, ln, col)
            elif k == "generators":
                names = v.split()
            else:
                raise ParseError(f"unknown key '{k}'", ln, col)
        first = sections["nhomog"][0][0]
        if n is None or names is None:
            raise ParseError("[nhomog] needs 'n = ...' and 'generators = ...'", first, 1)
        words = []
        for ln, col0, body in rels:
            r = parse_word_relation(body, names, fld, ln, col0)
            bad = [w for w in r if len(w) != n]
            if bad:
                raise ParseError(f"relation word of length {len(bad[0])}, expected {n}", ln, col0)
            words.append(r)
        try:
            out.nhomog = NHomogPresentation.from_words(n, len(names), words, fld, names)
        except ValueError as exc:
            raise ParseError(str(exc), first, 1) from None
    return out


def serialize(p: ParsedFile) -> str:
    out = ["[field]", p.field.name, ""]
    if p.operad is not None:
        out.append("[operad]")
        for g in p.operad.gens:
            tail = f" {g.weight}" if g.weight != 1 else ""
            out.append(f"gen {g.name} {g.arity} {g.degree}{tail}")
        for r in p.operad.relations:
            if r:
                out.append(f"rel {element_to_text(r)}")
        out.append("")
    if p.algebra is not None:
        out.append("[constants]")
        for c in p.algebra.constants:
            out.append(f"{c.name} {c.weight} {c.degree}")
        out.append("")
        out.append("[algebra-relations]")
        for r in p.algebra.relations:
            if r:
                out.append(element_to_text(r))
        out.append("")
    if p.order is not None:
        out += ["[order]", " ".join(p.order), ""]
    if p.bounds:
        out.append("[bounds]")
        for k in sorted(p.bounds):
            out.append(f"{k} = {p.bounds[k]}")
        out.append("")
    if p.nhomog is not None:
        a = p.nhomog
        out += ["[nhomog]", f"n = {a.n}", f"generators = {' '.join(a.names)}"]
        for row in a.relations.rows:
            parts = []
            for k in sorted(row):
                c = str(row[k])
                w = " ".join(a.names[x] for x in index_word(k, a.v_dim, a.n))
                sign = "-" if c.startswith("-") else "+"
                mag = c.lstrip("-")
                body = w if mag == "1" else f"{mag} {w}"
                parts.append((sign, body))
            text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
            text += "".join(f" {s} {b}" for s, b in parts[1:])
            out.append(f"rel {text}")
        out.append("")
    return "\n".join(out)


def same_presentation(p: ParsedFile, q: ParsedFile) -> bool:
    """Equality of the parsed content (relation spans compared exactly)."""
    if p.field != q.field or p.order != q.order or p.bounds != q.bounds:
        return False
    for x, y in ((p.operad, q.operad), (p.algebra, q.algebra), (p.nhomog, q.nhomog)):
        if (x is None) != (y is None):
            return False
    if p.operad is not None:
        if p.operad.gens != q.operad.gens or \
                [r for r in p.operad.relations if r] != [r for r in q.operad.relations if r]:
            return False
    if p.algebra is not None:
        if p.algebra.constants != q.algebra.constants:
            return False
        if [r for r in p.algebra.relations if r] != [r for r in q.algebra.relations if r]:
            return False
    if p.nhomog is not None:
        if not p.nhomog.same_relations(q.nhomog) or p.nhomog.names != q.nhomog.names:
            return False
    return True
