"""Ideals in Laurent-polynomial rings, backed by sympy's Gröbner engine.

An :class:`Ideal` lives in k[x_1..x_n] with some variables declared units.
It is always stored saturated with respect to the product of its unit
variables, so it represents an ideal of the localized ring faithfully.
"""

from __future__ import annotations

import itertools
import math
import threading
from functools import lru_cache
from typing import Iterable, Sequence, Union

from sympy import symbols as _symbols
from sympy.polys.domains import FiniteField
from sympy.polys.groebnertools import groebner as _sympy_groebner
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.rings import PolyRing

from .field import FieldSpec
from .polynomial import Polynomial

INFINITE = math.inf

Order = Union[str, tuple]


class _Slice:
    """Picklable, comparable replacement for ``lambda m: m[a:b]``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def __call__(self, m):
        return m[self.a:self.b]


@lru_cache(maxsize=None)
def _ring(n: int, domain, key: tuple) -> PolyRing:
    names = _symbols(" ".join(f"x{i}" for i in range(n)) + " ", seq=True)
    if key == ("lex",):
        order = lex
    elif key == ("grevlex",):
        order = grevlex
    else:
        blocks, start = [], 0
        for size in key[1]:
            blocks.append((grevlex, _Slice(start, start + size)))
            start += size
        order = ProductOrder(*blocks)
    return PolyRing(names, domain, order)


def _normalize(g: Polynomial, unit_variables) -> Polynomial:
    """Multiply by a unit monomial so that exponents are >= 0 and no unit variable divides g."""
    if not g.terms:
        return g
    shift = []
    for i, v in enumerate(g.variables):
        low = min(m[i] for m in g.terms)
        if v in unit_variables:
            shift.append(-low)
        elif low < 0:
            raise ValueError(f"negative power of non-unit variable {v} in {g}")
        else:
            shift.append(0)
    return g.shift(shift) if any(shift) else g


def _to_ring(p: Polynomial, R: PolyRing, perm=None):
    f = p.field
    if perm is None:
        return R.from_dict({m: f.to_sympy(c) for m, c in p.terms.items()})
    return R.from_dict({tuple(m[i] for i in perm): f.to_sympy(c) for m, c in p.terms.items()})


def _from_ring(e, field: FieldSpec, variables, inv=None) -> Polynomial:
    if inv is None:
        return Polynomial(field, variables, {m: field.from_sympy(c) for m, c in e.terms()})
    return Polynomial(field, variables, {tuple(m[i] for i in inv): field.from_sympy(c) for m, c in e.terms()})


def _order_layout(variables: Sequence[str], order: Order):
    """Return (ring key, permutation into ring positions or None)."""
    if order in ("grevlex", "lex"):
        return (order,), None
    blocks = [tuple(b) for b in order if len(b)]
    flat = [v for b in blocks for v in b]
    if sorted(flat) != sorted(variables) or len(set(flat)) != len(flat):
        raise ValueError(f"blocks {order} do not partition {variables}")
    perm = [variables.index(v) for v in flat]
    if len(blocks) == 1:
        key = ("grevlex",)
    else:
        key = ("blocks", tuple(len(b) for b in blocks))
    return key, perm


def groebner_basis(polys: Iterable[Polynomial], variables: Sequence[str], field: FieldSpec, order: Order = "grevlex") -> tuple[Polynomial, ...]:
    """Reduced monic Gröbner basis of the ideal generated by ``polys``.

    ``order`` is ``"grevlex"``, ``"lex"`` (variables listed first are larger)
    or a sequence of variable blocks, each ordered by grevlex, earlier blocks
    eliminating later ones.
    """
    variables = tuple(variables)
    polys = [p for p in polys if p]
    if not polys:
        return ()
    n = len(variables)
    if n == 0:
        return (Polynomial.one(field, variables),)
    key, perm = _order_layout(variables, order)
    R = _ring(n, field.sympy_domain, key)
    inv = None
    if perm is not None:
        inv = [0] * n
        for j, i in enumerate(perm):
            inv[i] = j
    basis = _sympy_groebner([_to_ring(p, R, perm) for p in polys], R)
    out = [_from_ring(g, field, variables, inv) for g in basis if g]
    return tuple(out)


class _MonicFiniteField(FiniteField):
    """GF(p) whose canonical unit makes leading coefficients 1.

    sympy's default only fixes signs, so fractions over GF(p)(params) keep
    stray constants (3/3) and equal elements compare unequal.
    """

    def canonical_unit(self, a):
        return self.one / a if a else self.one

    def __eq__(self, other):
        return type(other) is type(self) and self.mod == other.mod

    def __hash__(self):
        return hash(("monic GF", self.mod))


@lru_cache(maxsize=None)
def _function_field(domain, nparams: int):
    """k(p_0..p_{m-1}) as a sympy fraction field, with its polynomial ring."""
    from sympy.polys.fields import FracField

    if domain.is_FiniteField:
        domain = _MonicFiniteField(domain.mod)
    names = _symbols(" ".join(f"p{i}" for i in range(nparams)) + " ", seq=True)
    K = FracField(names, domain)
    return K, K.ring


class FunctionFieldRing:
    """k(params)[fiber] as a sympy ring, with conversions from and to :class:`Polynomial`."""

    def __init__(self, field: FieldSpec, fiber_blocks: Sequence[Sequence[str]], params: Sequence[str]):
        self.field = field
        self.params = tuple(params)
        blocks = [tuple(b) for b in fiber_blocks if len(b)]
        self.fiber = tuple(v for b in blocks for v in b)
        key = ("grevlex",) if len(blocks) <= 1 else ("blocks", tuple(len(b) for b in blocks))
        if self.params:
            self.K, self.Kr = _function_field(field.sympy_domain, len(self.params))
            domain = self.K.to_domain()
        else:
            self.K = self.Kr = None
            domain = field.sympy_domain
        self.ring = _ring(len(self.fiber), domain, key)

    def convert(self, p: Polynomial):
        """p as an element of k(params)[fiber]; params may carry negative powers."""
        idx_f = [p.variables.index(v) for v in self.fiber]
        if not self.params:
            return self.ring.from_dict({tuple(m[i] for i in idx_f): self.field.to_sympy(c) for m, c in p.terms.items()})
        idx_p = [p.variables.index(v) for v in self.params]
        low = [min((m[i] for m in p.terms), default=0) for i in idx_p]
        split: dict[tuple, dict[tuple, object]] = {}
        for m, c in p.terms.items():
            fm = tuple(m[i] for i in idx_f)
            pm = tuple(m[i] - lo for i, lo in zip(idx_p, low))
            split.setdefault(fm, {})[pm] = self.field.to_sympy(c)
        return self.ring.from_dict({fm: self.K(self.Kr.from_dict(d)) for fm, d in split.items()})

    def clear(self, terms: dict) -> dict[tuple, Polynomial]:
        """Rescale {key: element of k(params)} to coprime coefficients in k[params]."""
        field, params = self.field, self.params
        if not params:
            lead = terms[max(terms)]
            inv = field.sympy_domain.one / lead
            return {k: Polynomial.constant(field, (), field.from_sympy(c * inv)) for k, c in terms.items()}
        Kr = self.Kr
        L = Kr.one
        for c in terms.values():
            L = L.lcm(c.denom)
        nums = {k: c.numer * L.exquo(c.denom) for k, c in terms.items()}
        content = Kr.zero
        for a in nums.values():
            content = content.gcd(a)
        return {
            k: Polynomial(field, params, {m: field.from_sympy(b) for m, b in a.exquo(content).terms()})
            for k, a in nums.items()
        }

    def groebner(self, polys: Iterable[Polynomial]) -> list:
        return [g for g in _sympy_groebner([self.convert(p) for p in polys if p], self.ring) if g]


def function_field_basis(
    polys: Iterable[Polynomial],
    fiber_blocks: Sequence[Sequence[str]],
    params: Sequence[str],
    field: FieldSpec,
) -> list[dict[tuple, Polynomial]]:
    """Reduced Gröbner basis over k(params)[fiber], for a block order on the fiber.

    Each element is returned with denominators cleared, as {fiber exponent:
    coefficient in k[params]} with coprime coefficients.
    """
    F = FunctionFieldRing(field, fiber_blocks, params)
    return [F.clear(dict(g.terms())) for g in F.groebner(polys)]


def _sort_key(p: Polynomial):
    return sorted(p.terms, reverse=True)


class Ideal:
    """An ideal of k[x, t^±1] (t the unit variables), stored saturated."""

    __slots__ = ("field", "variables", "unit_variables", "generators", "_gb", "_lock", "_dim")

    def __init__(
        self,
        field: FieldSpec,
        variables: Sequence[str],
        generators: Iterable[Polynomial] = (),
        unit_variables: Iterable[str] = (),
        *,
        saturated: bool = False,
    ):
        self.field = field
        self.variables = tuple(variables)
        units = set(unit_variables)
        unknown = units - set(self.variables)
        if unknown:
            raise ValueError(f"unit variables {sorted(unknown)} not among {self.variables}")
        self.unit_variables = tuple(v for v in self.variables if v in units)
        gens = []
        for g in generators:
            if g:
                gens.append(_normalize(g.embed(self.variables), units))
        self._gb: dict = {}
        self._lock = threading.Lock()
        self._dim = None
        if not saturated and gens and self.unit_variables:
            w = _fresh_name(self.variables)
            ext = (w,) + self.variables
            prod = Polynomial.one(field, ext)
            for v in self.unit_variables:
                prod = prod * Polynomial.var(field, ext, v)
            aux = Polynomial.var(field, ext, w) * prod - 1
            big = groebner_basis([g.embed(ext) for g in gens] + [aux], ext, field, [(w,), self.variables])
            gens = [g.embed(self.variables) for g in big if g.degree(w) <= 0]
            self._gb["grevlex"] = tuple(gens)
        self.generators = tuple(gens)

    # constructors ---------------------------------------------------------

    @classmethod
    def unit(cls, field, variables, unit_variables=()) -> "Ideal":
        return cls(field, variables, [Polynomial.one(field, variables)], unit_variables, saturated=True)

    @classmethod
    def zero(cls, field, variables, unit_variables=()) -> "Ideal":
        return cls(field, variables, [], unit_variables, saturated=True)

    def _new(self, generators, saturated=False, variables=None, unit_variables=None) -> "Ideal":
        return Ideal(
            self.field,
            self.variables if variables is None else variables,
            generators,
            self.unit_variables if unit_variables is None else unit_variables,
            saturated=saturated,
        )

    # Gröbner bases -------------------------------------------------------

    def groebner(self, order: Order = "grevlex") -> tuple[Polynomial, ...]:
        key = order if isinstance(order, str) else tuple(tuple(b) for b in order)
        with self._lock:
            cached = self._gb.get(key)
        if cached is not None:
            return cached
        basis = groebner_basis(self.generators, self.variables, self.field, key)
        with self._lock:
            self._gb.setdefault(key, basis)
            return self._gb[key]

    def lex_basis(self) -> tuple[Polynomial, ...]:
        return tuple(sorted(self.groebner("lex"), key=_sort_key, reverse=True))

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def reduce(self, p: Polynomial) -> Polynomial:
        """Normal form of ``p`` (unit monomials cleared) modulo the grevlex basis."""
        p = _normalize(p.embed(self.variables), set(self.unit_variables))
        gb = self.groebner()
        if not gb or not p:
            return p
        R = _ring(len(self.variables), self.field.sympy_domain, ("grevlex",))
        r = _to_ring(p, R).rem([_to_ring(g, R) for g in gb])
        return _from_ring(r, self.field, self.variables)

    def contains(self, p: Polynomial) -> bool:
        return not self.reduce(p)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.field == other.field
            and self.unit_variables == other.unit_variables
            and self.groebner() == other.groebner()
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.unit_variables, self.groebner()))

    # ideal operations -------------------------------------------------------

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.variables != self.variables:
            raise ValueError("ideals live in different rings")
        return self._new(self.generators + other.generators)

    def with_generators(self, polys: Iterable[Polynomial]) -> "Ideal":
        return self._new(list(self.generators) + [p.embed(self.variables) for p in polys])

    def saturate(self, f: Polynomial) -> "Ideal":
        """(I : f^∞)."""
        if not f:
            raise ValueError("saturation by zero")
        f = _normalize(f.embed(self.variables), set(self.unit_variables))
        if f.is_constant() or not self.generators:
            return self
        w = _fresh_name(self.variables)
        ext = (w,) + self.variables
        aux = Polynomial.var(self.field, ext, w) * f.embed(ext) - 1
        big = groebner_basis([g.embed(ext) for g in self.generators] + [aux], ext, self.field, [(w,), self.variables])
        gens = [g.embed(self.variables) for g in big if g.degree(w) <= 0]
        out = self._new(gens, saturated=True)
        out._gb["grevlex"] = tuple(gens)
        return out

    def eliminate(self, keep: Sequence[str]) -> "Ideal":
        """I ∩ k[keep], returned in the variables ``keep`` (in ambient order)."""
        keep_set = set(keep)
        kept = tuple(v for v in self.variables if v in keep_set)
        dropped = tuple(v for v in self.variables if v not in keep_set)
        units = tuple(v for v in self.unit_variables if v in keep_set)
        if not dropped:
            return self
        if not kept:
            gens = [Polynomial.one(self.field, ())] if self.is_unit() else []
            return Ideal(self.field, (), gens, (), saturated=True)
        gb = self.groebner([dropped, kept])
        gens = [g.embed(kept) for g in gb if not any(g.degree(v) > 0 for v in dropped)]
        out = Ideal(self.field, kept, gens, units, saturated=True)
        out._gb["grevlex"] = tuple(gens)
        return out

    def embed(self, variables: Sequence[str], unit_variables: Iterable[str] | None = None) -> "Ideal":
        """Extend to a polynomial ring with more variables (reordering allowed)."""
        variables = tuple(variables)
        units = set(self.unit_variables if unit_variables is None else unit_variables)
        lost = set(self.unit_variables) - units
        gens = [g.embed(variables) for g in self.generators]
        out = Ideal(self.field, variables, gens, units, saturated=not lost)
        if variables[: len(self.variables)] == self.variables and not lost:
            # grevlex bases survive appending variables that the generators do not use
            if "grevlex" in self._gb and all(v not in self.variables for v in variables[len(self.variables):]):
                out._gb["grevlex"] = tuple(g.embed(variables) for g in self._gb["grevlex"])
        return out

    def rename(self, mapping) -> "Ideal":
        variables = tuple(mapping.get(v, v) for v in self.variables)
        units = tuple(mapping.get(v, v) for v in self.unit_variables)
        out = Ideal(self.field, variables, [g.rename(mapping) for g in self.generators], units, saturated=True)
        for key in ("grevlex", "lex"):
            if key in self._gb:
                out._gb[key] = tuple(g.rename(mapping) for g in self._gb[key])
        return out

    def substitute(self, images, variables: Sequence[str], unit_variables: Iterable[str]) -> "Ideal":
        """Image of the generators under a substitution, as an ideal of the new ring."""
        return Ideal(self.field, variables, [g.substitute(images, variables) for g in self.generators], unit_variables)

    # dimension theory ----------------------------------------------------

    def _leading_monomials(self, order: Order = "grevlex"):
        R_order = order
        gb = self.groebner(R_order)
        if not self.variables:
            return [() for _ in gb]
        key, perm = _order_layout(self.variables, R_order)
        R = _ring(len(self.variables), self.field.sympy_domain, key)
        out = []
        for g in gb:
            lm = _to_ring(g, R, perm).LM
            if perm is None:
                out.append(tuple(lm))
            else:
                m = [0] * len(self.variables)
                for j, i in enumerate(perm):
                    m[i] = lm[j]
                out.append(tuple(m))
        return out

    def independent_sets(self) -> list[tuple[str, ...]]:
        """All maximal-size sets of variables independent modulo the ideal."""
        if self.is_unit():
            return []
        lms = self._leading_monomials()
        n = len(self.variables)
        for size in range(n, -1, -1):
            found = []
            for combo in itertools.combinations(range(n), size):
                cs = set(combo)
                if all(any(m[i] and i not in cs for i in range(n)) for m in lms):
                    found.append(tuple(self.variables[i] for i in combo))
            if found:
                return found
        return [()]

    def dimension(self) -> int:
        """Krull dimension of the quotient ring; -1 for the unit ideal."""
        if self._dim is None:
            self._dim = -1 if self.is_unit() else len(self.independent_sets()[0])
        return self._dim

    def standard_monomials(self, params: Sequence[str] = ()):
        """Standard monomials of the fiber variables over k(params), or None if infinitely many.

        Returns an empty list when the ideal meets k[params] nontrivially (the
        extension to k(params) is the unit ideal).
        """
        params = tuple(v for v in self.variables if v in set(params))
        fiber = tuple(v for v in self.variables if v not in set(params))
        if self.is_unit():
            return []
        order = [fiber, params] if params else "grevlex"
        gb = self.groebner(order) if params else self.groebner()
        lms = self._leading_monomials(order) if params else self._leading_monomials()
        fidx = [self.variables.index(v) for v in fiber]
        pure = []
        for g, m in zip(gb, lms):
            fm = tuple(m[i] for i in fidx)
            if not any(fm):
                return []
            pure.append(fm)
        k = len(fiber)
        # zero-dimensional iff every fiber variable has a pure power among leading monomials
        bounds = []
        for j in range(k):
            powers = [fm[j] for fm in pure if fm[j] and all(fm[i] == 0 for i in range(k) if i != j)]
            if not powers:
                return None
            bounds.append(min(powers))
        out = []
        for mono in itertools.product(*[range(b) for b in bounds]):
            if not any(all(mono[i] >= fm[i] for i in range(k)) for fm in pure):
                out.append(mono)
        return out

    def fiber_dimension(self, params: Sequence[str] = ()) -> int:
        """Dimension of the extension to k(params)[other variables]; -1 if it is the unit ideal."""
        pset = set(params)
        params = tuple(v for v in self.variables if v in pset)
        if not params:
            return self.dimension()
        if self.is_unit():
            return -1
        fiber = tuple(v for v in self.variables if v not in pset)
        order = [fiber, params]
        fidx = [self.variables.index(v) for v in fiber]
        parts = []
        for m in self._leading_monomials(order):
            fm = tuple(m[i] for i in fidx)
            if not any(fm):
                return -1
            parts.append(fm)
        k = len(fiber)
        for size in range(k, -1, -1):
            for combo in itertools.combinations(range(k), size):
                cs = set(combo)
                if all(any(fm[i] and i not in cs for i in range(k)) for fm in parts):
                    return size
        return 0

    def quotient_dimension(self, params: Sequence[str] = ()):
        """dim over k(params) of the quotient, or :data:`INFINITE`."""
        sm = self.standard_monomials(params)
        return INFINITE if sm is None else len(sm)

    def is_zero_dimensional(self, params: Sequence[str] = ()) -> bool:
        return self.standard_monomials(params) is not None

    def meets_parameters(self, params: Sequence[str]) -> bool:
        """True when the ideal contains a nonzero element of k[params]."""
        return not self.eliminate(params).is_zero()

    # rendering ------------------------------------------------------------

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.groebner()) + ")"

    def __repr__(self) -> str:
        return f"Ideal{self} in {self.variables}"


def _fresh_name(variables: Sequence[str]) -> str:
    name = "_w"
    while name in variables:
        name += "_"
    return name


def leading_coefficient_product(ideal: Ideal, params: Sequence[str]) -> Polynomial:
    """Product of the distinct non-unit k[params] leading coefficients of a block basis.

    Away from its zeros the basis specializes well: fibers over the base keep
    the generic shape.
    """
    pset = set(params)
    params = tuple(v for v in ideal.variables if v in pset)
    fiber = tuple(v for v in ideal.variables if v not in pset)
    h = Polynomial.one(ideal.field, ideal.variables)
    if not params or ideal.is_unit():
        return h
    order = [fiber, params]
    fidx = [ideal.variables.index(v) for v in fiber]
    units = set(ideal.unit_variables)
    seen = set()
    for g, lm in zip(ideal.groebner(order), ideal._leading_monomials(order)):
        fpart = tuple(lm[i] for i in fidx)
        coeff = Polynomial(
            ideal.field,
            ideal.variables,
            {m: c for m, c in g.terms.items() if tuple(m[i] for i in fidx) == fpart},
        )
        coeff = _normalize(coeff.shift([-lm[i] if i in fidx else 0 for i in range(len(lm))]), units)
        if not coeff.is_constant() and coeff not in seen:
            seen.add(coeff)
            h = h * coeff
    return h


def extension_contraction(ideal: Ideal, params: Sequence[str]) -> Ideal:
    """I·k(params)[fiber] ∩ k[all variables], computed as I : h^∞."""
    h = leading_coefficient_product(ideal, params)
    if h.is_constant():
        return ideal
    return ideal.saturate(h)
