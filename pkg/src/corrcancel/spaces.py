"""Cells (products of G_m and A^1 lines over k) and morphisms between them."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra.field import FieldSpec
from .algebra.parse import parse_polynomial
from .algebra.polynomial import Polynomial
from .errors import FieldMismatch, InvalidMorphism


@dataclass(frozen=True)
class Coord:
    name: str
    multiplicative: bool

    def __str__(self) -> str:
        return f"{'Gm' if self.multiplicative else 'A1'}({self.name})"


@dataclass(frozen=True)
class Cell:
    """Spec of k[x_1..x_n, t_1^±1..t_m^±1]; the empty cell is the point."""

    field: FieldSpec
    coords: tuple[Coord, ...] = ()

    def __post_init__(self):
        names = [c.name for c in self.coords]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")

    @classmethod
    def point(cls, field: FieldSpec) -> "Cell":
        return cls(field, ())

    @classmethod
    def gm(cls, field: FieldSpec, *names: str) -> "Cell":
        return cls(field, tuple(Coord(n, True) for n in names))

    @classmethod
    def a1(cls, field: FieldSpec, *names: str) -> "Cell":
        return cls(field, tuple(Coord(n, False) for n in names))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coords)

    @property
    def unit_variables(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coords if c.multiplicative)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def is_point(self) -> bool:
        return not self.coords

    def coord(self, name: str) -> Coord:
        for c in self.coords:
            if c.name == name:
                return c
        raise KeyError(name)

    def var(self, name: str) -> Polynomial:
        return Polynomial.var(self.field, self.variables, name)

    def constant(self, c) -> Polynomial:
        return Polynomial.constant(self.field, self.variables, c)

    def parse(self, text: str, **loc) -> Polynomial:
        return parse_polynomial(text, self.field, self.variables, **loc)

    def is_regular(self, f: Polynomial) -> bool:
        """True if ``f`` is a regular function (negative powers only of unit variables)."""
        units = set(self.unit_variables)
        return all(e >= 0 or v in units for m in f.terms for v, e in zip(f.variables, m))

    def is_unit(self, f: Polynomial) -> bool:
        return f.is_unit(self.unit_variables)

    def relabel(self, names: Sequence[str]) -> "Cell":
        """Same factors with new coordinate names (positional)."""
        if len(names) != len(self.coords):
            raise ValueError("relabel needs one name per coordinate")
        return Cell(self.field, tuple(Coord(n, c.multiplicative) for n, c in zip(names, self.coords)))

    def sub(self, names: Iterable[str]) -> "Cell":
        keep = set(names)
        return Cell(self.field, tuple(c for c in self.coords if c.name in keep))

    def __mul__(self, other: "Cell") -> "Cell":
        return product(self, other)

    def __str__(self) -> str:
        return " * ".join(str(c) for c in self.coords) if self.coords else "pt"


def _advance(name: str) -> str:
    m = re.fullmatch(r"(.*?)(\d+)", name)
    if m:
        return f"{m.group(1)}{int(m.group(2)) + 1}"
    if len(name) == 1 and name.isalpha():
        if name in "zZ":
            return name + "1"
        return chr(ord(name) + 1)
    return name + "2"


def fresh_name(name: str, taken: Iterable[str]) -> str:
    """Deterministic replacement for a clashing name: t->u->v, f1->f2, x'->x'2."""
    taken = set(taken)
    while name in taken:
        name = _advance(name)
    return name


def renaming_for(b: Cell, taken: Iterable[str]) -> dict[str, str]:
    """Rename the coordinates of ``b`` so that none collide with ``taken``."""
    used = set(taken)
    mapping = {}
    for v in b.variables:
        new = fresh_name(v, used)
        used.add(new)
        mapping[v] = new
    return mapping


def product(a: Cell, b: Cell) -> Cell:
    """a × b with a's coordinates first; clashing names of b are renamed."""
    if a.field != b.field:
        raise FieldMismatch(f"cannot multiply cells over {a.field} and {b.field}")
    mapping = renaming_for(b, a.variables)
    return Cell(a.field, a.coords + tuple(Coord(mapping[c.name], c.multiplicative) for c in b.coords))


@dataclass(frozen=True)
class CellMorphism:
    """A morphism given by one regular function on the source per target coordinate."""

    source: Cell
    target: Cell
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        if self.source.field != self.target.field:
            raise FieldMismatch("source and target over different fields")
        if len(self.images) != self.target.dimension:
            raise InvalidMorphism(f"{len(self.images)} images for {self.target.dimension} target coordinates")
        fixed = tuple(p.embed(self.source.variables) for p in self.images)
        object.__setattr__(self, "images", fixed)
        for c, img in zip(self.target.coords, fixed):
            if not self.source.is_regular(img):
                raise InvalidMorphism(f"image of {c.name} = {img} is not regular on {self.source}")
            if c.multiplicative and not self.source.is_unit(img):
                raise InvalidMorphism(f"image of multiplicative {c.name} = {img} is not a unit on {self.source}")

    @classmethod
    def from_mapping(cls, source: Cell, target: Cell, mapping: Mapping[str, Polynomial | str]) -> "CellMorphism":
        images = []
        for v in target.variables:
            img = mapping[v]
            if isinstance(img, str):
                img = source.parse(img)
            images.append(img)
        return cls(source, target, tuple(images))

    @classmethod
    def identity(cls, cell: Cell) -> "CellMorphism":
        return cls(cell, cell, tuple(cell.var(v) for v in cell.variables))

    @classmethod
    def projection(cls, source: Cell, names: Sequence[str], target: Cell | None = None) -> "CellMorphism":
        """Projection onto the listed coordinates (optionally relabelled to ``target``)."""
        sub = Cell(source.field, tuple(source.coord(n) for n in names))
        target = target or sub
        return cls(source, target, tuple(source.var(n) for n in names))

    @classmethod
    def to_point(cls, source: Cell) -> "CellMorphism":
        return cls(source, Cell.point(source.field), ())

    @classmethod
    def point_of(cls, target: Cell, values: Sequence) -> "CellMorphism":
        """The k-point of ``target`` with the given coordinates."""
        pt = Cell.point(target.field)
        if len(values) != target.dimension:
            raise InvalidMorphism("wrong number of coordinates")
        return cls(pt, target, tuple(Polynomial.constant(target.field, (), v) for v in values))

    def pullback(self, f: Polynomial) -> Polynomial:
        return pullback_function(self, f)

    def mapping(self) -> dict[str, Polynomial]:
        return dict(zip(self.target.variables, self.images))

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            img == self.source.var(v) for v, img in zip(self.target.variables, self.images)
        )

    def __str__(self) -> str:
        body = ", ".join(f"{v} = {img}" for v, img in zip(self.target.variables, self.images))
        return f"{self.source} -> {self.target} {{ {body} }}"


def pullback_function(m: CellMorphism, f: Polynomial) -> Polynomial:
    """f∘m, a regular function on the source."""
    f = f.embed(m.target.variables)
    return f.substitute(m.mapping(), m.source.variables)


def compose_morphisms(g: CellMorphism, f: CellMorphism) -> CellMorphism:
    """g∘f (first f, then g)."""
    if f.target != g.source:
        raise InvalidMorphism(f"cannot compose: {f.target} != {g.source}")
    return CellMorphism(f.source, g.target, tuple(pullback_function(f, img) for img in g.images))


def product_morphism(a: CellMorphism, b: CellMorphism) -> CellMorphism:
    """a × b between product cells (renaming as in :func:`product`)."""
    src = product(a.source, b.source)
    tgt = product(a.target, b.target)
    n = a.source.dimension
    src_b = src.variables[n:]
    ren = dict(zip(b.source.variables, src_b))
    images = [img.embed(src.variables) for img in a.images]
    images += [img.rename(ren).embed(src.variables) for img in b.images]
    return CellMorphism(src, tgt, tuple(images))
