"""Relative cycles on cells.

A :class:`Cycle` is an integer combination of prime components of a cell,
each dominant over a chosen set of base coordinates with generic fibers of a
common dimension ``r``. Multiplicities of subschemes are read off as lengths
of the generic-fiber algebra over k(base).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

from .algebra.artinian import decompose_artinian
from .algebra.field import FieldSpec
from .algebra.groebner import INFINITE, Ideal, leading_coefficient_product
from .algebra.polynomial import Polynomial
from .errors import (
    DegenerateCoordinates,
    FieldMismatch,
    InvalidMorphism,
    NotDominant,
    NotEquidimensional,
    NotFinite,
    NotFlat,
    NotPrime,
    NotProperOnSupport,
    UnsupportedBase,
    WrongDimension,
)
from .spaces import Cell, CellMorphism, Coord, product, renaming_for

MAX_ATTEMPTS = 8
MAX_MINORS = 20000


def _ordered(ambient: Cell, names: Iterable[str]) -> tuple[str, ...]:
    s = set(names)
    missing = s - set(ambient.variables)
    if missing:
        raise ValueError(f"base coordinates {sorted(missing)} not in {ambient}")
    return tuple(v for v in ambient.variables if v in s)


def ambient_ideal(ambient: Cell, generators: Iterable[Polynomial], *, saturated: bool = False) -> Ideal:
    return Ideal(ambient.field, ambient.variables, generators, ambient.unit_variables, saturated=saturated)


# ---------------------------------------------------------------------------
# finiteness and flatness


def is_finite_over(ideal: Ideal, base: Sequence[str]) -> bool:
    """True when k[V]/I (units inverted) is integral over k[base] (units inverted).

    A fiber variable y is integral iff the elimination ideal in k[base, y]
    has a basis element whose leading coefficient in y is a unit; for a
    multiplicative y the same test is applied to 1/y.
    """
    base = tuple(v for v in ideal.variables if v in set(base))
    fiber = [v for v in ideal.variables if v not in set(base)]
    if ideal.is_unit():
        return True
    for y in fiber:
        e = ideal.eliminate(base + (y,))
        if not _has_monic(e, y, base):
            return False
        if y in ideal.unit_variables:
            vars_ = e.variables
            inv = Polynomial.var(ideal.field, vars_, y) ** -1
            rev = e.substitute({y: inv}, vars_, e.unit_variables)
            if not _has_monic(rev, y, base):
                return False
    return True


def _has_monic(e: Ideal, y: str, base: Sequence[str]) -> bool:
    # for a prime the elimination ideal is principal, so checking the basis is exact
    base = tuple(v for v in e.variables if v in set(base))
    order = [(y,), base] if base else "grevlex"
    units = set(e.unit_variables)
    for g in e.groebner(order):
        if g.degree(y) > 0 and g.leading_coefficient_in(y).is_unit(units):
            return True
    return False


def _monic_relation(ideal: Ideal, y: str, base: Sequence[str]) -> Polynomial:
    """A relation for y over k[base] with unit leading and (for units) trailing coefficient, made monic."""
    base = tuple(v for v in ideal.variables if v in set(base))
    e = ideal.eliminate(base + (y,))
    order = [(y,), base] if base else "grevlex"
    best = None
    units = set(ideal.unit_variables)
    for g in e.groebner(order):
        lc = g.leading_coefficient_in(y)
        if g.degree(y) > 0 and lc.is_unit(units):
            if y in units and not g.trailing_coefficient_in(y).is_unit(units):
                continue
            if best is None or g.degree(y) < best.degree(y):
                best = g
    if best is None:
        gens = e.groebner(order)
        cands = [g for g in gens if g.degree(y) > 0]
        best = min(cands, key=lambda g: g.degree(y)) if cands else None
        if best is None or not best.leading_coefficient_in(y).is_unit(units):
            raise NotFinite(f"{y} is not integral over k[{','.join(base)}]")
    lc = best.leading_coefficient_in(y)
    ((mono, c),) = lc.terms.items()
    inv = Polynomial.monomial(ideal.field, e.variables, [-a for a in mono], ideal.field.inv(c))
    return (best * inv).embed(ideal.variables)


@dataclass(frozen=True)
class FlatnessCertificate:
    flat: bool
    method: str

    def __bool__(self) -> bool:
        return self.flat


def _flatness(ideal: Ideal, base: Sequence[str], rank: int) -> FlatnessCertificate:
    base = tuple(v for v in ideal.variables if v in set(base))
    if len(base) <= 1:
        return FlatnessCertificate(True, "base of dimension <= 1")
    fiber = tuple(v for v in ideal.variables if v not in set(base))
    units = set(ideal.unit_variables)
    # a block basis with unit leading coefficients gives a free module
    order = [fiber, base]
    fidx = [ideal.variables.index(v) for v in fiber]
    ok = True
    for g, lm in zip(ideal.groebner(order), ideal._leading_monomials(order)):
        fpart = tuple(lm[i] for i in fidx)
        coeff = Polynomial(ideal.field, ideal.variables,
                           {m: c for m, c in g.terms.items() if tuple(m[i] for i in fidx) == fpart})
        if not coeff.is_unit(units):
            ok = False
            break
    if ok and all(y not in units for y in fiber):
        return FlatnessCertificate(True, "monic Groebner basis over the base")
    if not is_finite_over(ideal, base):
        return FlatnessCertificate(False, "not finite over the base")
    return _fitting_test(ideal, base, fiber, rank)


def _fitting_test(ideal: Ideal, base, fiber, rank) -> FlatnessCertificate:
    """Presentation of k[P] over R = k[base] (units inverted) and its Fitting ideal.

    T = R[fiber]/(monic relations) is free on a monomial basis; k[P] is the
    cokernel of the relations g*y^a expressed in that basis. It is flat iff the
    (N - rank)-minors generate R.
    """
    field = ideal.field
    V = ideal.variables
    units = set(ideal.unit_variables)
    rels = {y: _monic_relation(ideal, y, base) for y in fiber}
    degs = {y: rels[y].degree(y) for y in fiber}
    fidx = [V.index(y) for y in fiber]
    basis = list(itertools.product(*[range(degs[y]) for y in fiber]))
    pos = {b: i for i, b in enumerate(basis)}

    def reduce(p: Polynomial) -> Polynomial:
        changed = True
        while changed:
            changed = False
            for y in fiber:
                d = degs[y]
                i = V.index(y)
                if p.degree(y) >= d:
                    tail = rels[y] - Polynomial.var(field, V, y, d)
                    out = Polynomial.zero(field, V)
                    for m, c in p.terms.items():
                        if m[i] >= d:
                            rest = list(m)
                            rest[i] -= d
                            out = out - Polynomial.monomial(field, V, rest, c) * tail
                        else:
                            out = out + Polynomial.monomial(field, V, m, c)
                    p = out
                    changed = True
                if y in units and p.low_degree(y) < 0:
                    raise UnsupportedBase("negative fiber exponents in Fitting presentation")
        return p

    def to_row(p: Polynomial):
        row = [Polynomial.zero(field, V) for _ in basis]
        for m, c in p.terms.items():
            key = tuple(m[i] for i in fidx)
            bm = list(m)
            for i in fidx:
                bm[i] = 0
            row[pos[key]] = row[pos[key]] + Polynomial.monomial(field, V, bm, c)
        return row

    rows = []
    for g in ideal.generators:
        for b in basis:
            mono = [0] * len(V)
            for i, e in zip(fidx, b):
                mono[i] = e
            r = to_row(reduce(g * Polynomial.monomial(field, V, mono)))
            if any(r):
                rows.append(r)
    N = len(basis)
    # eliminate unit pivots; Fitting ideals are unchanged
    cols = list(range(N))
    while True:
        pivot = None
        for ri, r in enumerate(rows):
            for ci in cols:
                if r[ci] and r[ci].is_unit(units):
                    pivot = (ri, ci)
                    break
            if pivot:
                break
        if pivot is None:
            break
        ri, ci = pivot
        prow = rows.pop(ri)
        inv = prow[ci] ** -1
        new_rows = []
        for r in rows:
            if r[ci]:
                f = r[ci] * inv
                r = [a - f * b for a, b in zip(r, prow)]
            if any(r[c] for c in cols if c != ci):
                new_rows.append(r)
        rows = new_rows
        cols.remove(ci)
    size = len(cols) - rank
    if size < 0:
        return FlatnessCertificate(False, "rank exceeds presentation size")
    if size == 0:
        return FlatnessCertificate(True, "Fitting ideal is the unit ideal")
    if len(rows) < size:
        return FlatnessCertificate(False, "Fitting ideal is zero")
    n_minors = _binom(len(rows), size) * _binom(len(cols), size)
    if n_minors > MAX_MINORS:
        raise UnsupportedBase(f"Fitting test needs {n_minors} minors")
    minors = []
    for rs in itertools.combinations(range(len(rows)), size):
        for cs in itertools.combinations(cols, size):
            d = _det([[rows[i][j] for j in cs] for i in rs])
            if d:
                minors.append(d)
    R = Ideal(field, V, minors, ideal.unit_variables).eliminate(base)
    if R.is_unit():
        return FlatnessCertificate(True, "Fitting ideal is the unit ideal")
    return FlatnessCertificate(False, f"Fitting ideal {R} is proper")


def _binom(n, k):
    return math.comb(n, k)


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0] * 0


# ---------------------------------------------------------------------------
# prime components


@dataclass(frozen=True, eq=False)
class PrimeComponent:
    """A prime ideal of the ambient cell, dominant over the base coordinates."""

    ambient: Cell
    base: tuple[str, ...]
    ideal: Ideal
    r: int
    trusted: bool = False
    flat_hint: FlatnessCertificate | None = None

    @cached_property
    def key(self) -> tuple[str, ...]:
        return tuple(str(g) for g in self.ideal.lex_basis())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeComponent):
            return NotImplemented
        return (self.ambient, self.base, self.r, self.key) == (other.ambient, other.base, other.r, other.key)

    def __hash__(self) -> int:
        return hash((self.ambient, self.base, self.r, self.key))

    @property
    def field(self) -> FieldSpec:
        return self.ambient.field

    @property
    def fiber(self) -> tuple[str, ...]:
        return tuple(v for v in self.ambient.variables if v not in set(self.base))

    @cached_property
    def residue_degree(self) -> int | None:
        """[k(P) : k(base)] for relative dimension 0."""
        if self.r != 0:
            return None
        d = self.ideal.quotient_dimension(self.base)
        return int(d)

    @cached_property
    def finite(self) -> bool:
        return self.r == 0 and is_finite_over(self.ideal, self.base)

    @cached_property
    def flatness(self) -> FlatnessCertificate:
        if self.flat_hint is not None:
            return self.flat_hint
        if self.ideal.is_zero():
            return FlatnessCertificate(True, "whole ambient")
        if len(self.base) <= 1:
            return FlatnessCertificate(True, "base of dimension <= 1")
        if self.r != 0:
            return FlatnessCertificate(False, "flatness test needs a finite component")
        return _flatness(self.ideal, self.base, self.residue_degree)

    @cached_property
    def is_graph(self) -> bool:
        """True when every fiber coordinate is a function of the base on this component."""
        fiber = self.fiber
        if self.r != 0:
            return False
        if not fiber:
            return self.ideal.is_zero()
        order = [fiber, self.base] if self.base else "grevlex"
        gb = self.ideal.groebner(order)
        if len(gb) != len(fiber):
            return False
        seen = set()
        units = set(self.ambient.unit_variables)
        for g in gb:
            used = [y for y in fiber if g.degree(y) > 0]
            if len(used) != 1 or g.degree(used[0]) != 1 or used[0] in seen:
                return False
            if not g.leading_coefficient_in(used[0]).is_unit(units):
                return False
            seen.add(used[0])
        return True

    def transport(self, ambient: Cell, mapping, base: Sequence[str]) -> "PrimeComponent":
        """Rename coordinates by ``mapping`` and reorder them as in ``ambient``."""
        ideal = self.ideal.rename(mapping).embed(ambient.variables, ambient.unit_variables)
        return PrimeComponent(ambient, _ordered(ambient, base), ideal, self.r, self.trusted, self.flat_hint)

    def relabel(self, ambient: Cell, base: Sequence[str] | None = None) -> "PrimeComponent":
        mapping = dict(zip(self.ambient.variables, ambient.variables))
        new_base = tuple(mapping[v] for v in self.base) if base is None else tuple(base)
        return self.transport(ambient, mapping, new_base)

    def __str__(self) -> str:
        return "[" + (", ".join(self.key) or "0") + "]"


def validate_component(
    P: Ideal | Iterable[Polynomial],
    ambient: Cell,
    base: Sequence[str] = (),
    expect_finite: bool = False,
    *,
    trusted: bool = False,
) -> PrimeComponent:
    """Certify that P is a prime dominant over ``base`` (and finite, if asked)."""
    if not isinstance(P, Ideal):
        P = ambient_ideal(ambient, list(P))
    if P.field != ambient.field:
        raise FieldMismatch("ideal and ambient over different fields")
    base = _ordered(ambient, base)
    if P.is_unit():
        raise NotPrime("the unit ideal has no components")
    if base and not P.eliminate(base).is_zero():
        raise NotDominant(f"{P} meets k[{','.join(base)}]: elimination gives {P.eliminate(base)}")
    r = P.fiber_dimension(base)
    if r < 0:
        raise NotDominant(f"{P} is not dominant over the base")
    comp = PrimeComponent(ambient, base, P, r, trusted)
    if not trusted:
        cyc = cycl_of_ideal(P, ambient, base, r)
        if len(cyc.terms) != 1 or next(iter(cyc.terms.values())) != 1 or next(iter(cyc.terms)) != comp:
            raise NotPrime(f"{P} is not prime: its cycle is {cyc}")
    if expect_finite:
        if r != 0:
            raise NotFinite(f"{P} has relative dimension {r} over the base")
        if not comp.finite:
            raise NotFinite(f"{P} is not finite over k[{','.join(base)}]")
    return comp


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True, eq=False)
class Cycle:
    ambient: Cell
    base: tuple[str, ...]
    r: int
    terms: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base", _ordered(self.ambient, self.base))
        clean = {}
        for comp, m in dict(self.terms).items():
            if comp.ambient != self.ambient or comp.base != self.base or comp.r != self.r:
                raise ValueError(f"component {comp} does not live on {self.ambient} over {self.base} with r={self.r}")
            if m:
                clean[comp] = clean.get(comp, 0) + m
                if not clean[comp]:
                    del clean[comp]
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, ambient: Cell, base: Sequence[str] = (), r: int = 0) -> "Cycle":
        return cls(ambient, tuple(base), r, {})

    @classmethod
    def of(cls, comp: PrimeComponent, mult: int = 1) -> "Cycle":
        return cls(comp.ambient, comp.base, comp.r, {comp: mult})

    @property
    def field(self) -> FieldSpec:
        return self.ambient.field

    @property
    def base_cell(self) -> Cell:
        return self.ambient.sub(self.base)

    @property
    def fiber(self) -> tuple[str, ...]:
        return tuple(v for v in self.ambient.variables if v not in set(self.base))

    def is_zero(self) -> bool:
        return not self.terms

    def components(self) -> list[tuple[PrimeComponent, int]]:
        return sorted(self.terms.items(), key=lambda cm: (cm[0].key, cm[1]))

    def _check(self, other: "Cycle"):
        if (self.ambient, self.base, self.r) != (other.ambient, other.base, other.r):
            raise ValueError(
                f"incompatible cycles: {self.ambient}/{self.base}/r={self.r} vs {other.ambient}/{other.base}/r={other.r}"
            )

    def __add__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        terms = dict(self.terms)
        for c, m in other.terms.items():
            terms[c] = terms.get(c, 0) + m
        return Cycle(self.ambient, self.base, self.r, terms)

    def __neg__(self) -> "Cycle":
        return Cycle(self.ambient, self.base, self.r, {c: -m for c, m in self.terms.items()})

    def __sub__(self, other: "Cycle") -> "Cycle":
        return self + (-other)

    def __rmul__(self, k: int) -> "Cycle":
        return Cycle(self.ambient, self.base, self.r, {c: k * m for c, m in self.terms.items()})

    __mul__ = __rmul__

    def canonical(self) -> tuple:
        return tuple(sorted((c.key, m) for c, m in self.terms.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cycle):
            return NotImplemented
        return (self.ambient, self.base, self.r) == (other.ambient, other.base, other.r) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.ambient, self.base, self.r, self.canonical()))

    def relabel(self, ambient: Cell, base: Sequence[str] | None = None) -> "Cycle":
        """Rename coordinates positionally onto ``ambient`` (same factor types)."""
        if [c.multiplicative for c in ambient.coords] != [c.multiplicative for c in self.ambient.coords]:
            raise ValueError(f"cannot relabel {self.ambient} as {ambient}")
        mapping = dict(zip(self.ambient.variables, ambient.variables))
        return self.transport(ambient, mapping, base)

    def degree(self) -> int:
        return degree_over_base(self)

    def transport(self, ambient: Cell, mapping, base: Sequence[str] | None = None) -> "Cycle":
        """Rename coordinates by ``mapping`` (old -> new) and reorder them as in ``ambient``."""
        new_base = tuple(mapping.get(v, v) for v in self.base) if base is None else tuple(base)
        new_base = _ordered(ambient, new_base)
        return Cycle(ambient, new_base, self.r, {c.transport(ambient, mapping, new_base): m for c, m in self.terms.items()})

    def to_json(self) -> dict:
        return {
            "ambient": str(self.ambient),
            "base": list(self.base),
            "r": self.r,
            "components": [
                {"groebner": list(c.key), "mult": m, "residue_degree": c.residue_degree}
                for c, m in sorted(self.terms.items(), key=lambda cm: (cm[0].key, cm[1]))
            ],
        }

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, m in self.components():
            body = str(c)
            parts.append((m, body))
        out = ""
        for i, (m, body) in enumerate(parts):
            sign = "-" if m < 0 else "+"
            coef = "" if abs(m) == 1 else f"{abs(m)}*"
            if i == 0:
                out = ("-" if m < 0 else "") + coef + body
            else:
                out += f" {sign} {coef}{body}"
        return out

    def __repr__(self) -> str:
        return f"Cycle({self} on {self.ambient} over ({','.join(self.base)}), r={self.r})"


# ---------------------------------------------------------------------------
# cycl of a closed subscheme


def cycl_of_ideal(
    I: Ideal,
    ambient: Cell,
    base: Sequence[str] = (),
    r: int = 0,
    rng: random.Random | None = None,
) -> Cycle:
    """Cycle of the subscheme V(I): components of relative dimension r dominant over the base.

    Multiplicities are lengths of the local rings at generic points.
    """
    base = _ordered(ambient, base)
    if I.variables != ambient.variables:
        I = Ideal(ambient.field, ambient.variables, [g.embed(ambient.variables) for g in I.generators], ambient.unit_variables)
    if I.is_unit():
        return Cycle.zero(ambient, base, r)
    if r == 0:
        dec = decompose_artinian(I, base, rng)
        terms = {}
        for f in dec.factors:
            comp = PrimeComponent(ambient, base, f.prime, 0)
            terms[comp] = terms.get(comp, 0) + f.length
        return Cycle(ambient, base, 0, terms)
    fdim = I.fiber_dimension(base)
    if fdim > r:
        raise WrongDimension(f"generic fiber of {I} has dimension {fdim} > {r}")
    if fdim < r:
        return Cycle.zero(ambient, base, r)
    fiber = tuple(v for v in ambient.variables if v not in set(base))
    rng = rng or random.Random(0xC1C1)
    field = ambient.field
    for attempt in range(MAX_ATTEMPTS):
        # generic linear projections of the fiber to A^r become extra parameters
        aux = []
        taken = set(ambient.variables)
        for k in range(r):
            name = "_u"
            while name in taken:
                name += "_"
            taken.add(name)
            aux.append(name)
        ext = ambient.variables + tuple(aux)
        rel = []
        for a in aux:
            form = Polynomial.var(field, ext, a)
            for y in fiber:
                form = form - Polynomial.var(field, ext, y) * field.random_element(rng, bound=4 + attempt)
            if attempt:
                form = form - field.random_element(rng)
            rel.append(form)
        J = Ideal(field, ext, [g.embed(ext) for g in I.generators] + rel, ambient.unit_variables, saturated=True)
        params = base + tuple(aux)
        try:
            dec = decompose_artinian(J, params, rng)
        except (DegenerateCoordinates, WrongDimension):
            continue
        # components of the right dimension must all be visible over k(base, u)
        if not _no_missed_components(J, params, base, r):
            continue
        terms = {}
        for f in dec.factors:
            prime = f.prime.eliminate(ambient.variables)
            prime = Ideal(field, ambient.variables, prime.generators, ambient.unit_variables, saturated=True)
            comp = PrimeComponent(ambient, base, prime, r)
            terms[comp] = terms.get(comp, 0) + f.length
        return Cycle(ambient, base, r, terms)
    raise DegenerateCoordinates(f"no good projection found for {I} after {MAX_ATTEMPTS} attempts")


def _no_missed_components(J: Ideal, params, base, r) -> bool:
    """Every component with r-dimensional generic fiber over k(base) dominates (base, u)."""
    h = leading_coefficient_product(J, params)
    if h.is_constant():
        return True
    return J.with_generators([h]).fiber_dimension(base) < r


# ---------------------------------------------------------------------------
# operations on cycles


def degree_over_base(Z: Cycle) -> int:
    if Z.r != 0:
        raise WrongDimension("degree is defined for relative 0-cycles")
    return sum(m * c.residue_degree for c, m in Z.terms.items())


def rebase(Z: Cycle, new_base: Sequence[str]) -> Cycle:
    """View Z over a coarser base (a subset of its base coordinates)."""
    new_base = _ordered(Z.ambient, new_base)
    if not set(new_base) <= set(Z.base):
        raise ValueError(f"{new_base} is not contained in {Z.base}")
    r = Z.r + len(Z.base) - len(new_base)
    terms = {}
    for c, m in Z.terms.items():
        if c.ideal.fiber_dimension(new_base) != r:
            raise NotEquidimensional(f"{c} does not have {r}-dimensional generic fibers over {new_base}")
        terms[PrimeComponent(Z.ambient, new_base, c.ideal, r, c.trusted)] = m
    return Cycle(Z.ambient, new_base, r, terms)


def _is_coordinate_map(f: CellMorphism) -> list[str] | None:
    """Source coordinate names hit by each target coordinate, if f is injective on coordinates."""
    names = []
    for img in f.images:
        if not img.is_monomial():
            return None
        ((mono, c),) = img.terms.items()
        if c != 1 or sum(mono) != 1 or any(e not in (0, 1) for e in mono):
            return None
        names.append(f.source.variables[mono.index(1)])
    if len(set(names)) != len(names):
        return None
    return names


def base_change(Z: Cycle, f: CellMorphism, *, check_flat: bool = True) -> Cycle:
    """Pull back Z along f: S' -> base(Z).

    The new ambient is S' followed by the fiber coordinates of Z (renamed on
    clashes); the new base is S'.
    """
    B = Z.base_cell
    if f.target != B:
        raise InvalidMorphism(f"base change target {f.target} is not the base {B} of the cycle")
    S = f.source
    fiber_cell = Z.ambient.sub(Z.fiber)
    ren = renaming_for(fiber_cell, S.variables)
    new_ambient = Cell(S.field, S.coords + tuple(Coord(ren[c.name], c.multiplicative) for c in fiber_cell.coords))
    V = new_ambient.variables
    images = {b: img.embed(V) for b, img in zip(B.variables, f.images)}
    images.update({y: Polynomial.var(S.field, V, ren[y]) for y in Z.fiber})
    coord = _is_coordinate_map(f)
    out = Cycle.zero(new_ambient, S.variables, Z.r)
    for c, m in Z.terms.items():
        if coord is None and check_flat and not c.flatness:
            raise NotFlat(f"{c} is not flat over {B}: {c.flatness.method}")
        J = c.ideal.substitute(images, V, new_ambient.unit_variables)
        if coord is not None:
            # a coordinate projection is flat and keeps the component prime
            if J.is_unit():
                continue
            hint = FlatnessCertificate(True, "graph") if c.is_graph else c.flatness
            part = Cycle.of(PrimeComponent(new_ambient, S.variables, J, Z.r, c.trusted, hint), m)
        else:
            part = m * cycl_of_ideal(J, new_ambient, S.variables, Z.r)
        out = out + part
    return out


def _target_base(Z: Cycle, p: CellMorphism, target_base):
    if target_base is not None:
        return _ordered(p.target, target_base)
    names = []
    for v, img in zip(p.target.variables, p.images):
        if img.is_monomial():
            ((mono, c),) = img.terms.items()
            if c == 1 and sum(mono) == 1 and all(e in (0, 1) for e in mono):
                src = p.source.variables[mono.index(1)]
                if src in Z.base:
                    names.append((v, src))
    srcs = [s for _, s in names]
    if sorted(srcs) != sorted(Z.base) or len(set(srcs)) != len(srcs):
        raise InvalidMorphism(f"{p} does not identify the base {Z.base} with target coordinates")
    return tuple(v for v, _ in names)


def push_forward(Z: Cycle, p: CellMorphism, target_base: Sequence[str] | None = None) -> Cycle:
    """Proper push-forward: each component maps to deg·[image] (0 if the dimension drops)."""
    if p.source != Z.ambient:
        raise InvalidMorphism(f"{p} does not start at {Z.ambient}")
    T = p.target
    tbase = _target_base(Z, p, target_base)
    ident = _identifies_base(Z, p, tbase)
    if p.is_identity():
        return Z
    out = Cycle.zero(T, tbase, Z.r)
    field = T.field
    A = Z.ambient
    ren = renaming_for(T, A.variables)
    Tp = tuple(ren[v] for v in T.variables)
    ext = A.variables + Tp
    units = A.unit_variables + tuple(ren[v] for v in T.unit_variables)
    back = {ren[v]: v for v in T.variables}
    for c, m in Z.terms.items():
        graph = [Polynomial.var(field, ext, ren[v]) - img.embed(ext) for v, img in zip(T.variables, p.images)]
        G = Ideal(field, ext, [g.embed(ext) for g in c.ideal.generators] + graph, units)
        Q = G.eliminate(Tp).rename(back)
        Q = Ideal(field, T.variables, Q.generators, T.unit_variables, saturated=True)
        # a finite component is proper over anything the base maps to identically
        if not (c.r == 0 and ident and c.finite):
            if not is_finite_over(G, Tp):
                raise NotProperOnSupport(f"{p} is not proper on {c}")
        if Q.dimension() < c.ideal.dimension():
            continue
        if c.r == 0:
            deg_c = c.residue_degree
            deg_q = Q.quotient_dimension(tbase)
            deg = deg_c // int(deg_q)
            if deg * deg_q != deg_c:
                raise WrongDimension("non-integral push-forward degree")
        else:
            U = Q.independent_sets()[0]
            Ug = tuple(ren[v] for v in U)
            num = G.quotient_dimension(Ug)
            den = Q.quotient_dimension(U)
            if num == INFINITE or den == INFINITE or num % den:
                raise WrongDimension("push-forward degree undefined")
            deg = int(num // den)
        comp = PrimeComponent(T, tbase, Q, c.r, c.trusted)
        out = out + Cycle.of(comp, m * deg)
    return out


def _identifies_base(Z: Cycle, p: CellMorphism, tbase) -> bool:
    hit = []
    for v in tbase:
        img = p.images[p.target.variables.index(v)]
        if img.used_variables() and len(img.terms) == 1 and img == Polynomial.var(img.field, img.variables, img.used_variables()[0]):
            hit.append(img.used_variables()[0])
        else:
            return False
    return sorted(hit) == sorted(Z.base)


def external_product(a: Cycle, b: Cycle) -> Cycle:
    """a × b on the product ambient, re-decomposed into primes."""
    if a.field != b.field:
        raise FieldMismatch("cycles over different fields")
    amb = product(a.ambient, b.ambient)
    ren = dict(zip(b.ambient.variables, amb.variables[a.ambient.dimension:]))
    base = a.base + tuple(ren[v] for v in b.base)
    r = a.r + b.r
    V = amb.variables
    out = Cycle.zero(amb, base, r)
    for ca, ma in a.terms.items():
        for cb, mb in b.terms.items():
            gens = [g.embed(V) for g in ca.ideal.generators]
            gens += [g.rename(ren).embed(V) for g in cb.ideal.generators]
            rational = (ca.r == 0 and ca.residue_degree == 1) or (cb.r == 0 and cb.residue_degree == 1) \
                or ca.ideal.is_zero() or cb.ideal.is_zero()
            if rational:
                J = ambient_ideal(amb, gens, saturated=True)
                out = out + Cycle.of(PrimeComponent(amb, _ordered(amb, base), J, r, ca.trusted or cb.trusted), ma * mb)
            else:
                J = ambient_ideal(amb, gens)
                out = out + (ma * mb) * cycl_of_ideal(J, amb, base, r)
    return out


def is_flat(c: PrimeComponent) -> FlatnessCertificate:
    return c.flatness


def fundamental_cycle(ambient: Cell, base: Sequence[str] = ()) -> Cycle:
    """[ambient] as a cycle over the given base."""
    base = _ordered(ambient, base)
    comp = PrimeComponent(ambient, base, ambient_ideal(ambient, [], saturated=True), ambient.dimension - len(base))
    return Cycle.of(comp)
