"""Algebras over a non-symmetric operad via extension of constants.

The algebra generators become 0-ary generators ("constants"); the operad
generators are relabelled with weight 0 so that the weight of an arity-0
tree is the total weight of its constants.  Completion of the extended
presentation, truncated by arity + weight, gives normal forms for the
algebra up to that weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .groebner import Bounds, GroebnerBasis, buchberger, normal_enumerator
from .linalg import QQ, Field
from .ordering import MonomialOrder, PathLexOrder
from .trees import Generator, GeneratorSet, OperadElement, Tree, _Enumerator


@dataclass
class OperadPresentation:
    gens: GeneratorSet
    relations: list[OperadElement]
    field: Field = QQ

    def __post_init__(self):
        for r in self.relations:
            if len(r.degrees()) > 1:
                raise ValueError(f"relation {r} mixes homological degrees")
            for t in r.terms:
                for g in t.labels:
                    if g.name not in self.gens or self.gens[g.name] != g:
                        raise ValueError(f"relation uses undeclared generator {g.name}")

    def default_order(self) -> PathLexOrder:
        return PathLexOrder.default(self.gens)


@dataclass
class AlgebraPresentation:
    operad: OperadPresentation
    constants: list[Generator]
    relations: list[OperadElement] = dc_field(default_factory=list)

    def __post_init__(self):
        for c in self.constants:
            if c.arity != 0:
                raise ValueError(f"constant {c.name} must be 0-ary")
            if c.weight < 1:
                raise ValueError(f"constant {c.name} needs weight >= 1")
        self.constants = [c if c.constant else c._replace(constant=True) for c in self.constants]
        for r in self.relations:
            if r.arity not in (0, None):
                raise ValueError("algebra relations must have arity 0")

    @property
    def field(self) -> Field:
        return self.operad.field


def relabel(t: Tree, table: dict[str, Generator]) -> Tree:
    if t.gen is None:
        return t
    return Tree(table[t.gen.name],
                tuple(None if c is None else relabel(c, table) for c in t.children))


def relabel_element(f: OperadElement, table: dict[str, Generator]) -> OperadElement:
    return OperadElement({relabel(t, table): c for t, c in f.terms.items()}, f.field, f.arity)


def extended_generators(p: OperadPresentation, constants: Sequence[Generator]) -> GeneratorSet:
    ops = [g._replace(weight=0) if g.arity >= 2 else g for g in p.gens]
    clash = {g.name for g in ops} & {c.name for c in constants}
    if clash:
        raise ValueError(f"name clash between operations and constants: {sorted(clash)}")
    return GeneratorSet(ops + [c if c.constant else c._replace(constant=True) for c in constants])


def extension_of_constants(p: OperadPresentation, a: AlgebraPresentation) -> OperadPresentation:
    """Presentation of P ⋉ A: operad relations plus the algebra relations."""
    if a.operad is not p and a.operad.gens != p.gens:
        raise ValueError("algebra presentation is over a different operad")
    gens = extended_generators(p, a.constants)
    table = {g.name: g for g in gens}
    rels = [relabel_element(r, table) for r in p.relations]
    rels += [relabel_element(r, table) for r in a.relations]
    return OperadPresentation(gens, rels, p.field)


def algebra_order(a: AlgebraPresentation, alphabet: Sequence[str] | None = None) -> PathLexOrder:
    gens = extended_generators(a.operad, a.constants)
    if alphabet is None:
        return PathLexOrder.default(gens)
    return PathLexOrder([gens[n] for n in alphabet])


def algebra_groebner(a: AlgebraPresentation, o: MonomialOrder | None = None,
                     bounds: Bounds | None = None) -> GroebnerBasis:
    """Completion of the extended presentation; certified for arity + weight <= max_size."""
    if bounds is None or bounds.max_size is None:
        raise ValueError("a size bound (arity + weight) is required")
    ext = extension_of_constants(a.operad, a)
    if o is None:
        o = PathLexOrder.default(ext.gens)
    return buchberger(ext.relations, o, bounds, a.field)


def algebra_normal_basis(a: AlgebraPresentation, g: GroebnerBasis,
                         max_weight: int) -> dict[int, list[Tree]]:
    """Arity-0 normal monomials per weight 1..max_weight (a basis of the algebra)."""
    if g.bounds.max_size is None or g.bounds.max_size < max_weight:
        raise ValueError(f"basis certified only up to weight {g.bounds.max_size}")
    gens = extended_generators(a.operad, a.constants)
    en = normal_enumerator(g, gens)
    return {w: sorted(en.trees(0, w), key=g.order.key) for w in range(1, max_weight + 1)}


def free_cell(gens: Sequence[Generator], arity: int, weight: int) -> list[Tree]:
    return _Enumerator(gens).trees(arity, weight)
