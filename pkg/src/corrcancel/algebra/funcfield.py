"""Arithmetic in K = k(params) and in finite K-algebras, on python-flint.

sympy's fraction fields over GF(p) fall back to dense subresultant gcds, which
dominates any linear algebra over K.  Here fractions are pairs of flint
multivariate polynomials, reduced by flint's gcd and with monic denominators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint

from .field import FieldSpec
from .polynomial import Polynomial


@lru_cache(maxsize=None)
def _context(characteristic: int, nparams: int):
    names = tuple(f"p{i}" for i in range(nparams))
    if characteristic:
        return flint.nmod_mpoly_ctx.get(names, modulus=characteristic)
    return flint.fmpq_mpoly_ctx.get(names)


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        if den is None:
            den = num.context().from_dict({(0,) * num.context().nvars(): 1})
        if not reduced and not num.is_zero():
            g = num.gcd(den)
            if not g.is_one():
                num, den = num / g, den / g
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            num, den = num * inv, den * inv
        if num.is_zero():
            den = den.context().from_dict({(0,) * den.context().nvars(): 1})
        self.num, self.den = num, den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunction(self.num * 0, self.den)
        # cross-cancel first to keep the products small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        return RationalFunction(
            (self.num / g1) * (other.num / g2),
            (self.den / g2) * (other.den / g1),
            reduced=True,
        )

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in k(params)")
        return RationalFunction(self.den, self.num, reduced=True)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __repr__(self) -> str:
        return f"({self.num})/({self.den})"


class FunctionField:
    """K = k(params) for a given field and parameter list."""

    def __init__(self, field: FieldSpec, params: Sequence[str]):
        self.field = field
        self.params = tuple(params)
        self.ctx = _context(field.characteristic, len(self.params))
        self.one = RationalFunction(self.ctx.from_dict({(0,) * len(self.params): 1}), reduced=True)
        self.zero = RationalFunction(self.ctx.from_dict({}), reduced=True)

    def _scalar(self, c):
        if self.field.characteristic:
            return int(c) % self.field.characteristic
        c = Fraction(c)
        return flint.fmpq(c.numerator, c.denominator)

    def _back(self, c):
        if self.field.characteristic:
            return int(c)
        return Fraction(int(c.p), int(c.q))

    def mpoly(self, coeffs: dict[tuple, object]):
        """Polynomial in the params from {exponent: scalar}; exponents may be negative."""
        if not coeffs:
            return self.ctx.from_dict({})
        n = len(self.params)
        low = [min(m[i] for m in coeffs) for i in range(n)]
        return self.ctx.from_dict({tuple(e - lo for e, lo in zip(m, low)): self._scalar(c) for m, c in coeffs.items()})

    def element(self, coeffs: dict[tuple, object]) -> RationalFunction:
        """Element of K from a Laurent polynomial in the params, given as {exponent: scalar}."""
        if not coeffs:
            return self.zero
        n = len(self.params)
        low = [min(0, min(m[i] for m in coeffs)) for i in range(n)]
        num = self.ctx.from_dict({tuple(e - lo for e, lo in zip(m, low)): self._scalar(c) for m, c in coeffs.items()})
        den = self.ctx.from_dict({tuple(-lo for lo in low): 1})
        return RationalFunction(num, den)

    def to_polynomial(self, p) -> Polynomial:
        return Polynomial(self.field, self.params, {tuple(int(e) for e in m): self._back(c) for m, c in p.to_dict().items()})

    def clear(self, values: dict) -> dict:
        """Common rescaling of {key: RationalFunction} to coprime polynomials in k[params]."""
        items = [(k, v) for k, v in values.items() if v]
        L = self.one.num
        for _, v in items:
            L = (L * v.den) / L.gcd(v.den)
        nums = {k: v.num * (L / v.den) for k, v in items}
        content = None
        for a in nums.values():
            content = a if content is None else content.gcd(a)
        if content is not None and not content.is_one():
            nums = {k: a / content for k, a in nums.items()}
        return {k: self.to_polynomial(a) for k, a in nums.items()}


def _grevlex_key(m: tuple) -> tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


class FiniteAlgebra:
    """K[fiber]/J given by a Gröbner basis over K (grevlex on the fiber)."""

    def __init__(self, K: FunctionField, fiber: Sequence[str], basis: Iterable[dict[tuple, Polynomial]]):
        self.K = K
        self.fiber = tuple(fiber)
        self.basis = []
        for row in basis:
            g = {m: K.element(c.terms) for m, c in row.items()}
            lm = max(g, key=_grevlex_key)
            inv = g[lm].inverse()
            g = {m: c * inv for m, c in g.items()}
            self.basis.append((lm, g))

    def element(self, p: Polynomial) -> dict:
        """Split a polynomial in fiber + params into {fiber exponent: element of K}."""
        idx_f = [p.variables.index(v) for v in self.fiber]
        idx_p = [p.variables.index(v) for v in self.K.params]
        split: dict[tuple, dict] = {}
        for m, c in p.terms.items():
            split.setdefault(tuple(m[i] for i in idx_f), {})[tuple(m[i] for i in idx_p)] = c
        return {fm: self.K.element(d) for fm, d in split.items()}

    def reduce(self, p: dict) -> dict:
        """Normal form modulo the basis."""
        p = dict(p)
        out = {}
        zero = self.K.zero
        while p:
            m = max(p, key=_grevlex_key)
            c = p.pop(m)
            for lm, g in self.basis:
                if all(a >= b for a, b in zip(m, lm)):
                    q = tuple(a - b for a, b in zip(m, lm))
                    for gm, gc in g.items():
                        if gm == lm:
                            continue
                        mm = tuple(a + b for a, b in zip(gm, q))
                        v = p.get(mm, zero) - c * gc
                        if v:
                            p[mm] = v
                        else:
                            p.pop(mm, None)
                    break
            else:
                out[m] = c
        return out

    def multiply(self, a: dict, b: dict) -> dict:
        out: dict = {}
        zero = self.K.zero
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                v = out.get(m, zero) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self.reduce(out)

    def minimal_polynomial(self, lam: dict, cap: int) -> dict[int, Polynomial] | None:
        """Coefficients (in k[params], coprime) of the minimal polynomial of lam, or None."""
        K = self.K
        unit = {(0,) * len(self.fiber): K.one}
        cur = self.reduce(unit)
        pivots: list[tuple[tuple, dict, dict]] = []
        for k in range(cap + 1):
            vec = dict(cur)
            combo = {k: K.one}
            for mono, pvec, pcombo in pivots:
                c = vec.get(mono)
                if not c:
                    continue
                for m2, a in pvec.items():
                    v = vec.get(m2, K.zero) - c * a
                    if v:
                        vec[m2] = v
                    else:
                        vec.pop(m2, None)
                for j, a in pcombo.items():
                    combo[j] = combo.get(j, K.zero) - c * a
            if not vec:
                return K.clear(combo)
            mono = max(vec, key=_grevlex_key)
            inv = vec[mono].inverse()
            pivots.append((mono, {m2: a * inv for m2, a in vec.items()}, {j: a * inv for j, a in combo.items()}))
            cur = self.multiply(cur, lam)
        return None
