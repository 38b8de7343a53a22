"""Principal Cartier divisors f₊/f₋ on cells and their intersection with relative cycles."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .algebra.factor import factor
from .algebra.groebner import Ideal, leading_coefficient_product
from .algebra.polynomial import Polynomial
from .cycles import (
    Cycle,
    PrimeComponent,
    ambient_ideal,
    base_change,
    cycl_of_ideal,
    push_forward,
)
from .errors import ImproperIntersection, InvalidMorphism, ScenarioError, ZeroRestriction
from .report import CheckReport, compare
from .spaces import Cell, CellMorphism, pullback_function


@dataclass(frozen=True, eq=False)
class CartierDivisor:
    ambient: Cell
    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        V = self.ambient.variables
        num = self.numerator.embed(V)
        den = self.denominator.embed(V)
        if not num or not den:
            raise ValueError("numerator and denominator of a divisor must be nonzero")
        for f in (num, den):
            if not self.ambient.is_regular(f):
                raise ValueError(f"{f} is not regular on {self.ambient}")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def principal(cls, ambient: Cell, f: Polynomial | str) -> "CartierDivisor":
        if isinstance(f, str):
            f = ambient.parse(f)
        return cls(ambient, f, ambient.constant(1))

    @classmethod
    def parse(cls, ambient: Cell, text: str, **loc) -> "CartierDivisor":
        """``(num) / (den)``; a top-level ``/`` followed by ``(`` is the fraction bar."""
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0 and re.match(r"\s*\(", text[i + 1:]):
                num = ambient.parse(text[:i], **loc)
                col = loc.get("column", 0)
                den = ambient.parse(text[i + 1:], **{**loc, "column": col + i + 1} if loc else {})
                if not num or not den:
                    raise ScenarioError("divisor numerator and denominator must be nonzero", loc.get("line", 0), col)
                return cls(ambient, num, den)
        return cls.principal(ambient, ambient.parse(text, **loc))

    def __add__(self, other: "CartierDivisor") -> "CartierDivisor":
        if other.ambient != self.ambient:
            raise ValueError("divisors on different cells")
        return CartierDivisor(self.ambient, self.numerator * other.numerator, self.denominator * other.denominator)

    def __neg__(self) -> "CartierDivisor":
        return CartierDivisor(self.ambient, self.denominator, self.numerator)

    def __sub__(self, other: "CartierDivisor") -> "CartierDivisor":
        return self + (-other)

    def pullback(self, m: CellMorphism) -> "CartierDivisor":
        """m^*(D); the restrictions of f₊ and f₋ must stay nonzero."""
        if m.target != self.ambient:
            raise InvalidMorphism(f"{m} does not land in {self.ambient}")
        num = pullback_function(m, self.numerator)
        den = pullback_function(m, self.denominator)
        if not num or not den:
            raise ZeroRestriction(f"pullback of {self} along {m} is not defined")
        return CartierDivisor(m.source, num, den)

    def __str__(self) -> str:
        if self.denominator.is_constant() and self.denominator.constant_value() == 1:
            return f"D({self.numerator})"
        return f"D(({self.numerator})/({self.denominator}))"


def _prime_factors(f: Polynomial, ambient: Cell) -> list[tuple[Polynomial, int]]:
    """Irreducible factors of f that are not units of the cell."""
    units = set(ambient.unit_variables)
    g = f.clear_denominators() if f.has_negative_exponents() else f
    if not g.used_variables():
        return []
    _, facs = factor(g)
    return [(p, e) for p, e in facs if not p.is_unit(units)]


def _hypersurface(ambient: Cell, p: Polynomial) -> PrimeComponent:
    return PrimeComponent(ambient, (), ambient_ideal(ambient, [p], saturated=True), ambient.dimension - 1)


def divisor_cycle(D: CartierDivisor) -> Cycle:
    """cycl(f₊ = 0) − cycl(f₋ = 0), zeros on the excluded loci removed."""
    A = D.ambient
    r = max(A.dimension - 1, 0)
    out = Cycle.zero(A, (), r)
    if A.is_point:
        return out
    for f, sign in ((D.numerator, 1), (D.denominator, -1)):
        for p, e in _prime_factors(f, A):
            out = out + Cycle.of(_hypersurface(A, p), sign * e)
    return out


def support(D: CartierDivisor) -> list[Ideal]:
    """Prime ideals of the components of cycl(D) with nonzero multiplicity."""
    return [c.ideal for c, _ in divisor_cycle(D).components()]


def _fiber_check(J: Ideal, base: Sequence[str], d: int) -> bool:
    """All fibers of V(J) over the base have dimension <= d - 1."""
    if J.is_unit():
        return True
    if not base:
        return J.dimension() <= d - 1
    if J.fiber_dimension(base) > d - 1:
        return False
    # fibers can only jump over the zeros of the leading coefficients
    h = leading_coefficient_product(J, base)
    if h.is_constant():
        return True
    # exact for a one-dimensional base, conservative beyond that
    return J.with_generators([h]).dimension() <= d - 1


def _component_properness(c: PrimeComponent, D: CartierDivisor, supp: list[Ideal]) -> str | None:
    """Reason why D fails to meet the component properly, or None."""
    h = D.ambient.constant(1)
    for q in supp:
        g = q.generators[0]
        if c.ideal.contains(g):
            return f"component {c} lies in the support of {D} (factor {g})"
        h = h * g
    if not supp:
        return None
    J = c.ideal.with_generators([h])
    if not _fiber_check(J, c.base, c.r):
        return f"fibers of supp({D}) on {c} over the base have dimension >= {c.r}"
    return None


def intersects_properly(Z: Cycle, D: CartierDivisor) -> bool:
    if D.ambient != Z.ambient:
        raise ValueError("divisor and cycle on different cells")
    supp = support(D)
    return all(_component_properness(c, D, supp) is None for c in Z.terms)


def intersect(Z: Cycle, D: CartierDivisor) -> Cycle:
    """(Z, D) = Σ n_i [cycl(P_i + f₊) − cycl(P_i + f₋)], a cycle of relative dimension r − 1."""
    if D.ambient != Z.ambient:
        raise ValueError("divisor and cycle on different cells")
    if Z.r == 0:
        raise ImproperIntersection("a relative 0-cycle cannot be cut by a divisor")
    supp = support(D)
    out = Cycle.zero(Z.ambient, Z.base, Z.r - 1)
    for c, n in Z.terms.items():
        reason = _component_properness(c, D, supp)
        if reason:
            raise ImproperIntersection(reason)
        for f in (D.numerator, D.denominator):
            if c.ideal.contains(f):
                raise ZeroRestriction(f"{f} vanishes identically on {c}")
        for f, sign in ((D.numerator, 1), (D.denominator, -1)):
            if f.is_unit(Z.ambient.unit_variables):
                continue
            part = cycl_of_ideal(c.ideal.with_generators([f]), Z.ambient, Z.base, Z.r - 1)
            out = out + (sign * n) * part
    return out


def _fiber_inclusion(Z: Cycle, point: CellMorphism) -> tuple[Cell, CellMorphism]:
    """The fiber ambient over a base point and its inclusion into Z's ambient."""
    fiber_cell = Z.ambient.sub(Z.fiber)
    values = dict(zip(point.target.variables, point.images))
    images = []
    for v in Z.ambient.variables:
        if v in values:
            images.append(Polynomial.constant(Z.field, fiber_cell.variables, values[v].constant_value()))
        else:
            images.append(fiber_cell.var(v))
    return fiber_cell, CellMorphism(fiber_cell, Z.ambient, tuple(images))


def verify_eqp1(Z: Cycle, D: CartierDivisor, point: Sequence) -> CheckReport:
    """p^*(Z, D) = (p^* Z, p'^* D) for the inclusion p of a base point."""
    a = CellMorphism.point_of(Z.base_cell, point)
    _, incl = _fiber_inclusion(Z, a)

    def lhs():
        return base_change(intersect(Z, D), a)

    def rhs():
        return intersect(base_change(Z, a), D.pullback(incl))

    return compare("eqp1", lhs, rhs, detail=f"point {tuple(str(v) for v in point)}")


def verify_eqcorr(W: Cycle, Z: Cycle, D: CartierDivisor) -> CheckReport:
    """(Cor(W, Z), D) = Cor((W, D), Z)."""
    from .correspondences import cor_operator

    return compare("eqcorr", lambda: intersect(cor_operator(W, Z), D), lambda: cor_operator(intersect(W, D), Z))


def verify_eqp(f: CellMorphism, Z: Cycle, D: CartierDivisor) -> CheckReport:
    """f_*(Z, f^*D) = (f_*Z, D)."""
    return compare(
        "eqp",
        lambda: push_forward(intersect(Z, D.pullback(f)), f),
        lambda: intersect(push_forward(Z, f), D),
    )


def verify_form1(I: Ideal, f: Polynomial, ambient: Cell, base: Sequence[str] = (), r: int | None = None) -> CheckReport:
    """cycl(I + f) = Σ n_i cycl(P_i + f) where cycl(I) = Σ n_i [P_i]."""
    if r is None:
        r = I.fiber_dimension(base)

    def lhs():
        return cycl_of_ideal(I.with_generators([f]), ambient, base, r - 1)

    def rhs():
        total = Cycle.zero(ambient, base, r - 1)
        for c, n in cycl_of_ideal(I, ambient, base, r).terms.items():
            total = total + n * cycl_of_ideal(c.ideal.with_generators([f]), ambient, base, r - 1)
        return total

    return compare("form1", lhs, rhs)
