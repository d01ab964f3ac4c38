"""Admissible orders on tree monomials.

The path-lexicographic order compares the number of leaves first (labelled
0-ary vertices count as leaves), then the sequence of root-to-leaf label
words, word by word; words are compared by length and then letter by letter.
"""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .trees import Generator, IDENTITY, Tree, partial_compose, random_tree


def leaf_word_sequence(t: Tree) -> list[tuple[Generator, ...]]:
    """One word per leaf, leftmost first; labelled 0-ary vertices are leaves too."""
    if t.gen is None:
        return [()]
    out: list[tuple] = []

    def walk(node: Tree, prefix: tuple):
        here = prefix + (node.gen,)
        if not node.children:
            out.append(here)
            return
        for c in node.children:
            if c is None:
                out.append(here)
            else:
                walk(c, here)
    walk(t, ())
    return out


class MonomialOrder:
    """Interface: ``key(t)`` must be a sort key realizing a total order."""

    def key(self, t: Tree):
        raise NotImplementedError

    def compare(self, s: Tree, t: Tree) -> int:
        if s is t:
            return 0
        a, b = self.key(s), self.key(t)
        return (a > b) - (a < b)


class PathLexOrder(MonomialOrder):
    """Path-lexicographic order; ``alphabet`` lists generators greatest first."""

    def __init__(self, alphabet: Sequence[Generator] | Iterable[Generator]):
        alphabet = tuple(alphabet)
        if len({g.name for g in alphabet}) != len(alphabet):
            raise ValueError("duplicate letters in alphabet")
        self.alphabet = alphabet
        n = len(alphabet)
        self.rank = {g: n - idx for idx, g in enumerate(alphabet)}
        self._cache: dict[Tree, tuple] = {}
        self._neg: dict[Tree, tuple] = {}

    @classmethod
    def default(cls, gens: Iterable[Generator]) -> "PathLexOrder":
        """Declaration order, with 0-ary constants ranked above the operations."""
        gens = tuple(gens)
        consts = [g for g in gens if g.constant]
        ops = [g for g in gens if not g.constant]
        return cls(consts + ops)

    def names(self) -> list[str]:
        return [g.name for g in self.alphabet]

    def key(self, t: Tree) -> tuple:
        k = self._cache.get(t)
        if k is None:
            rank = self.rank
            try:
                words = tuple((len(w), tuple(rank[g] for g in w)) for w in leaf_word_sequence(t))
            except KeyError as exc:
                raise ValueError(f"generator {exc.args[0]} is not in the alphabet") from None
            k = (t.leaves, words)
            self._cache[t] = k
        return k

    def neg_key(self, t: Tree) -> tuple:
        """A key whose natural order is the reverse of ``key`` (for min-heaps)."""
        k = self._neg.get(t)
        if k is None:
            leaves, words = self.key(t)
            k = (-leaves, tuple((-n, tuple(-r for r in w)) for n, w in words))
            self._neg[t] = k
        return k

    def __eq__(self, other):
        return isinstance(other, PathLexOrder) and self.alphabet == other.alphabet

    def __hash__(self):
        return hash(self.alphabet)

    def __repr__(self):
        return "PathLexOrder(" + " > ".join(self.names()) + ")"


class PreorderLexOrder(MonomialOrder):
    """Plain lexicographic comparison of preorder encodings (not admissible)."""

    def __init__(self, alphabet: Sequence[Generator]):
        n = len(alphabet)
        self.rank = {g: n - idx for idx, g in enumerate(alphabet)}

    def key(self, t: Tree):
        return tuple(0 if g is None else self.rank[g] for g in t.preorder())


def compare(s: Tree, t: Tree, o: MonomialOrder) -> int:
    """-1, 0 or 1 as s is less than, equal to or greater than t."""
    return o.compare(s, t)


def slot_pattern(t: Tree) -> tuple[int, ...]:
    """Positions (0-based, among all leaves) of the open slots of t."""
    if t.gen is None:
        return (0,)
    out = []
    pos = 0

    def walk(node: Tree):
        nonlocal pos
        if not node.children:
            pos += 1
            return
        for c in node.children:
            if c is None:
                out.append(pos)
                pos += 1
            else:
                walk(c)
    walk(t)
    return tuple(out)


def random_admissibility_samples(gens: Sequence[Generator], n: int, rng: random.Random,
                                 max_vertices: int = 4):
    """Random (s, s2, host, slot, outer) tuples with s, s2 of equal arity.

    With 0-ary generators present, path-lex is only monotone for grafting
    into s, s2 when both have their slots at the same leaf positions (e.g.
    mu(a,-) > mu(-,a) but mu(a,b) < mu(b,a) when b > a); inner samples are
    drawn accordingly.  Relations that keep leaves in place never compare
    anything else.
    """
    out = []
    tries = 0
    while len(out) < n and tries < 200 * max(n, 1):
        tries += 1
        s = random_tree(gens, rng, max_vertices)
        s2 = random_tree(gens, rng, max_vertices)
        if s.arity != s2.arity or s is s2:
            continue
        outer = rng.random() < 0.5
        if outer:
            host = random_tree([g for g in gens if g.arity > 0], rng, max_vertices)
            if host.arity == 0:
                continue
            i = rng.randint(1, host.arity)
        else:
            if s.arity == 0 or slot_pattern(s) != slot_pattern(s2):
                continue
            host = random_tree(gens, rng, max_vertices)
            i = rng.randint(1, s.arity)
        out.append((s, s2, host, i, outer))
    return out


def check_admissible(o: MonomialOrder, samples: Iterable[tuple]) -> tuple[bool, tuple | None]:
    """Check that grafting preserves strict order on the given samples.

    Each sample is ``(s, s2, host, i, outer)``: when ``outer`` is true s and s2
    are grafted into slot i of host, otherwise host is grafted into slot i of
    s and s2.  Returns (True, None) or (False, witness).
    """
    for s, s2, host, i, outer in samples:
        c = o.compare(s, s2)
        if c == 0:
            continue
        if outer:
            _, a = partial_compose(host, i, s)
            _, b = partial_compose(host, i, s2)
        else:
            _, a = partial_compose(s, i, host)
            _, b = partial_compose(s2, i, host)
        if o.compare(a, b) != c:
            return False, (s, s2, host, i, outer, a, b)
    return True, None
