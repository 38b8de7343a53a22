"""Finite correspondences between cells and their composition.

A correspondence X -> Y is a relative 0-cycle on X×Y, finite over X.
Composition follows the pull-back / Cor / push-forward recipe literally:

    g∘f = (p_XZ)_* Cor(cycl(p_XY→Y)(g), f)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra.polynomial import Polynomial
from .cycles import (
    Cycle,
    FlatnessCertificate,
    PrimeComponent,
    ambient_ideal,
    base_change,
    cycl_of_ideal,
    external_product,
    push_forward,
    rebase,
    validate_component,
)
from .errors import FieldMismatch, InvalidMorphism, NotFinite, NotFlat
from .report import CheckReport, compare
from .spaces import Cell, CellMorphism, product


@dataclass(frozen=True, eq=False)
class Correspondence:
    source: Cell
    target: Cell
    cycle: Cycle

    def __post_init__(self):
        amb = product(self.source, self.target)
        if self.cycle.ambient != amb:
            raise ValueError(f"cycle lives on {self.cycle.ambient}, expected {amb}")
        if self.cycle.base != self.source.variables or self.cycle.r != 0:
            raise ValueError("a correspondence is a relative 0-cycle over its source")

    @property
    def field(self):
        return self.source.field

    @property
    def ambient(self) -> Cell:
        return self.cycle.ambient

    @classmethod
    def zero(cls, source: Cell, target: Cell) -> "Correspondence":
        return cls(source, target, Cycle.zero(product(source, target), source.variables, 0))

    @classmethod
    def from_components(
        cls,
        source: Cell,
        target: Cell,
        components: Iterable[tuple],
        *,
        trusted: bool = False,
    ) -> "Correspondence":
        """Build from (generators, multiplicity) pairs; generators are polynomials or strings on X×Y."""
        amb = product(source, target)
        cyc = Cycle.zero(amb, source.variables, 0)
        for gens, mult in components:
            if isinstance(gens, str):
                gens = [gens]
            polys = [amb.parse(g) if isinstance(g, str) else g.embed(amb.variables) for g in gens]
            comp = validate_component(ambient_ideal(amb, polys), amb, source.variables, expect_finite=True, trusted=trusted)
            cyc = cyc + Cycle.of(comp, mult)
        return cls(source, target, cyc)

    @classmethod
    def from_subscheme(cls, source: Cell, target: Cell, generators: Sequence, mult: int = 1) -> "Correspondence":
        """mult·cycl(V(generators)) on X×Y; the subscheme must be finite over X."""
        amb = product(source, target)
        polys = [amb.parse(g) if isinstance(g, str) else g.embed(amb.variables) for g in generators]
        cyc = mult * cycl_of_ideal(ambient_ideal(amb, polys), amb, source.variables, 0)
        for c in cyc.terms:
            if not c.finite:
                raise NotFinite(f"{c} is not finite over {source}")
        return cls(source, target, cyc)

    def target_names(self) -> tuple[str, ...]:
        return self.ambient.variables[self.source.dimension:]

    def __add__(self, other: "Correspondence") -> "Correspondence":
        self._check(other)
        return Correspondence(self.source, self.target, self.cycle + other.cycle)

    def __neg__(self) -> "Correspondence":
        return Correspondence(self.source, self.target, -self.cycle)

    def __sub__(self, other: "Correspondence") -> "Correspondence":
        return self + (-other)

    def __rmul__(self, k: int) -> "Correspondence":
        return Correspondence(self.source, self.target, k * self.cycle)

    __mul__ = __rmul__

    def _check(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError(f"correspondences {self.source}->{self.target} and {other.source}->{other.target} differ in type")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Correspondence):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.cycle == other.cycle

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.cycle))

    def is_zero(self) -> bool:
        return self.cycle.is_zero()

    def degree(self) -> int:
        return self.cycle.degree()

    def to_json(self) -> dict:
        return {"source": str(self.source), "target": str(self.target), "cycle": self.cycle.to_json()}

    def __str__(self) -> str:
        if self.source.is_point and self.target.is_point:
            return str(self.degree())
        return str(self.cycle)

    def __repr__(self) -> str:
        return f"Correspondence({self.source} -> {self.target}: {self.cycle})"


def graph(m: CellMorphism) -> Correspondence:
    """Γ_m ⊂ X×Y, a single component of multiplicity 1."""
    X, Y = m.source, m.target
    amb = product(X, Y)
    V = amb.variables
    ynames = V[X.dimension:]
    gens = [Polynomial.var(X.field, V, y) - img.embed(V) for y, img in zip(ynames, m.images)]
    comp = PrimeComponent(amb, X.variables, ambient_ideal(amb, gens, saturated=True), 0,
                          flat_hint=FlatnessCertificate(True, "graph"))
    return Correspondence(X, Y, Cycle.of(comp))


def identity(X: Cell) -> Correspondence:
    return graph(CellMorphism.identity(X))


def transpose(m: CellMorphism) -> Correspondence:
    """The graph of m: X -> Y read as a correspondence Y -> X; needs m finite."""
    X, Y = m.source, m.target
    amb = product(Y, X)
    V = amb.variables
    xnames = V[Y.dimension:]
    ren = dict(zip(X.variables, xnames))
    gens = [Polynomial.var(X.field, V, y) - img.rename(ren).embed(V) for y, img in zip(Y.variables, m.images)]
    comp = PrimeComponent(amb, Y.variables, ambient_ideal(amb, gens), 0)
    if not comp.finite:
        raise NotFinite(f"{m} is not finite, so its transpose is not a finite correspondence")
    return Correspondence(Y, X, Cycle.of(comp))


def cor_operator(W: Cycle, Z: Cycle) -> Cycle:
    """Cor(W, Z) = Σ n_i (e'_i)_* cycl(e_i)(W) for W over X and Z = Σ n_i Z_i on X.

    Each term is the cycle of W ×_X Z_i inside the ambient of W, which has
    relative dimension r(W) + r(Z) over the base of Z.
    """
    if W.base_cell != Z.ambient:
        raise ValueError(f"W lives over {W.base_cell}, Z on {Z.ambient}")
    r = W.r + Z.r
    out = Cycle.zero(W.ambient, Z.base, r)
    V = W.ambient.variables
    for q, n in Z.terms.items():
        for p, m in W.terms.items():
            if q.ideal.is_zero():
                out = out + (n * m) * rebase(Cycle.of(p), Z.base)
                continue
            if not p.flatness:
                raise NotFlat(f"{p} is not flat over {W.base_cell}: {p.flatness.method}")
            gens = list(p.ideal.generators) + [g.embed(V) for g in q.ideal.generators]
            J = ambient_ideal(W.ambient, gens)
            if p.is_graph:
                # W_j ≅ X, so W_j ×_X Z_i ≅ Z_i is integral with multiplicity one
                comp = PrimeComponent(W.ambient, Z.base, J, r, p.trusted or q.trusted)
                out = out + Cycle.of(comp, n * m)
            else:
                out = out + (n * m) * cycl_of_ideal(J, W.ambient, Z.base, r)
    return out


def compose(g: Correspondence, f: Correspondence) -> Correspondence:
    """g∘f for f: X -> Y and g: Y -> Z."""
    if f.target != g.source:
        raise InvalidMorphism(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}")
    X, Y, Zc = f.source, f.target, g.target
    XY = f.ambient
    # cycl(p)(g) for the projection p: XY -> Y
    p = CellMorphism(XY, g.cycle.base_cell, tuple(XY.var(v) for v in XY.variables[X.dimension:]))
    W = base_change(g.cycle, p)
    C = cor_operator(W, f.cycle)
    XZ = product(X, Zc)
    XYZ = W.ambient
    keep = XYZ.variables[: X.dimension] + XYZ.variables[XY.dimension:]
    proj = CellMorphism(XYZ, XZ, tuple(XYZ.var(v) for v in keep))
    return Correspondence(X, Zc, push_forward(C, proj, X.variables))


def tensor(a: Correspondence, b: Correspondence) -> Correspondence:
    """a ⊗ b : X X' -> Y Y' from the external product, coordinates reordered."""
    if a.field != b.field:
        raise FieldMismatch("correspondences over different fields")
    XX = product(a.source, b.source)
    YY = product(a.target, b.target)
    amb = product(XX, YY)
    E = external_product(a.cycle, b.cycle)
    # E lives on X Y X' Y'; map positionally onto X X' Y Y'
    nx, ny, nx2, ny2 = a.source.dimension, a.target.dimension, b.source.dimension, b.target.dimension
    ev = E.ambient.variables
    x1, y1 = ev[:nx], ev[nx:nx + ny]
    x2, y2 = ev[nx + ny:nx + ny + nx2], ev[nx + ny + nx2:]
    old_order = x1 + x2 + y1 + y2
    mapping = dict(zip(old_order, amb.variables))
    cyc = E.transport(amb, mapping, amb.variables[: nx + nx2])
    return Correspondence(XX, YY, cyc)


def verify_associativity(f: Correspondence, g: Correspondence, h: Correspondence) -> CheckReport:
    """(h∘g)∘f versus h∘(g∘f), each side computed from scratch."""
    return compare(
        "associativity",
        lambda: compose(compose(h, g), f),
        lambda: compose(h, compose(g, f)),
    )


def verify_graph_functor(f: CellMorphism, g: CellMorphism) -> CheckReport:
    from .spaces import compose_morphisms

    return compare(
        "graph functor",
        lambda: graph(compose_morphisms(g, f)),
        lambda: compose(graph(g), graph(f)),
    )


def verify_identity_laws(f: Correspondence) -> CheckReport:
    left = compare("identity (left)", lambda: compose(identity(f.target), f), lambda: f)
    if not left:
        return left
    return compare("identity (right)", lambda: compose(f, identity(f.source)), lambda: f)


def verify_degree_multiplicative(f: Correspondence, g: Correspondence) -> CheckReport:
    def both():
        return compose(g, f).degree()

    return compare("degree multiplicativity", both, lambda: f.degree() * g.degree())
