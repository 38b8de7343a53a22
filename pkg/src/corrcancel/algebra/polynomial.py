"""Sparse exact (Laurent) polynomials over a :class:`FieldSpec`.

Exponent vectors may carry negative entries; callers restrict those to
variables that are units of the ambient coordinate ring.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .field import FieldSpec, Scalar

Monomial = tuple


class Polynomial:
    __slots__ = ("field", "variables", "terms", "_hash")

    def __init__(self, field: FieldSpec, variables: Sequence[str], terms: Mapping[Monomial, Scalar] = ()):
        self.field = field
        self.variables = tuple(variables)
        clean = {}
        n = len(self.variables)
        for mono, c in dict(terms).items():
            if len(mono) != n:
                raise ValueError(f"exponent {mono} does not match variables {self.variables}")
            c = field.coerce(c)
            if c != 0:
                clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, field: FieldSpec, variables: Sequence[str], c) -> "Polynomial":
        return cls(field, variables, {(0,) * len(variables): field.coerce(c)})

    @classmethod
    def zero(cls, field: FieldSpec, variables: Sequence[str]) -> "Polynomial":
        return cls(field, variables, {})

    @classmethod
    def one(cls, field: FieldSpec, variables: Sequence[str]) -> "Polynomial":
        return cls.constant(field, variables, 1)

    @classmethod
    def var(cls, field: FieldSpec, variables: Sequence[str], name: str, power: int = 1) -> "Polynomial":
        variables = tuple(variables)
        mono = [0] * len(variables)
        mono[variables.index(name)] = power
        return cls(field, variables, {tuple(mono): field.coerce(1)})

    @classmethod
    def monomial(cls, field, variables, exponents: Sequence[int], c=1) -> "Polynomial":
        return cls(field, variables, {tuple(exponents): field.coerce(c)})

    def _like(self, terms) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.field = self.field
        out.variables = self.variables
        out.terms = terms
        out._hash = None
        return out

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self, unit_variables: Iterable[str]) -> bool:
        """Nonzero scalar times a Laurent monomial in ``unit_variables``."""
        if len(self.terms) != 1:
            return False
        units = set(unit_variables)
        (mono,) = self.terms
        return all(e == 0 or v in units for v, e in zip(self.variables, mono))

    def constant_value(self) -> Scalar:
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def used_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def has_negative_exponents(self) -> bool:
        return any(e < 0 for mono in self.terms for e in mono)

    # arithmetic -----------------------------------------------------------

    def _coerce_other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        return Polynomial.constant(self.field, self.variables, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce_other(other)
        f = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = f.add(terms.get(m, 0), c)
            if v == 0:
                terms.pop(m, None)
            else:
                terms[m] = v
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        f = self.field
        return self._like({m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce_other(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce_other(other) - self

    def __mul__(self, other) -> "Polynomial":
        f = self.field
        if not isinstance(other, Polynomial):
            c = f.coerce(other)
            if c == 0:
                return self._like({})
            return self._like({m: f.mul(a, c) for m, a in self.terms.items()})
        other = self._coerce_other(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = f.add(terms.get(m, 0), f.mul(c1, c2))
                if v == 0:
                    terms.pop(m, None)
                else:
                    terms[m] = v
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            ((mono, c),) = self.terms.items()
            return self._like({tuple(a * e for a in mono): self.field.pow(c, e)})
        result = Polynomial.one(self.field, self.variables)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return self * c

    def shift(self, exponents: Sequence[int]) -> "Polynomial":
        """Multiply by the Laurent monomial with the given exponents."""
        return self._like({tuple(a + b for a, b in zip(m, exponents)): c for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.field == other.field and self.terms == other.terms
        if isinstance(other, (int,)) or hasattr(other, "numerator"):
            return self == Polynomial.constant(self.field, self.variables, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, self.field, frozenset(self.terms.items())))
        return self._hash

    # structure ------------------------------------------------------------

    def degree(self, name: str) -> int:
        """Highest exponent of ``name``; -1 for the zero polynomial."""
        i = self.variables.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def low_degree(self, name: str) -> int:
        i = self.variables.index(name)
        return min((m[i] for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def coefficients_in(self, name: str) -> dict[int, "Polynomial"]:
        """Split as a polynomial in ``name`` with coefficients in the remaining variables."""
        i = self.variables.index(name)
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: self._like(t) for k, t in out.items()}

    def leading_coefficient_in(self, name: str) -> "Polynomial":
        coeffs = self.coefficients_in(name)
        return coeffs[max(coeffs)]

    def trailing_coefficient_in(self, name: str) -> "Polynomial":
        coeffs = self.coefficients_in(name)
        return coeffs[min(coeffs)]

    def leading_term(self) -> tuple[Monomial, Scalar]:
        """Lexicographic leading term with respect to the variable order."""
        m = max(self.terms)
        return m, self.terms[m]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term()
        return self * self.field.inv(c)

    def derivative(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        f = self.field
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = m[:i] + (m[i] - 1,) + m[i + 1:]
                v = f.mul(c, f.coerce(m[i]))
                if v != 0:
                    terms[mm] = v
        return self._like(terms)

    def clear_denominators(self) -> "Polynomial":
        """Multiply by a monomial so that every exponent is >= 0 and no variable divides out."""
        if not self.terms:
            return self
        lows = [min(m[i] for m in self.terms) for i in range(len(self.variables))]
        if not any(lows):
            return self
        return self.shift([-a for a in lows])

    # change of variables ------------------------------------------------

    def embed(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express in a (super)set of variables, possibly reordered."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for v in self.variables:
            if v not in pos:
                if any(m[self.variables.index(v)] for m in self.terms):
                    raise ValueError(f"variable {v} not in target {variables}")
                idx.append(None)
            else:
                idx.append(pos[v])
        n = len(variables)
        terms = {}
        for m, c in self.terms.items():
            new = [0] * n
            for e, j in zip(m, idx):
                if j is not None:
                    new[j] = e
            terms[tuple(new)] = c
        return Polynomial(self.field, variables, terms)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial(self.field, [mapping.get(v, v) for v in self.variables], self.terms)

    def substitute(self, images: Mapping[str, "Polynomial"], variables: Sequence[str]) -> "Polynomial":
        """Replace each variable by a polynomial in ``variables``.

        Variables absent from ``images`` must also be present in the target.
        Negative exponents require the image to be a single term.
        """
        variables = tuple(variables)
        f = self.field
        cache: dict = {}

        def power(name: str, e: int) -> Polynomial:
            key = (name, e)
            if key not in cache:
                img = images.get(name)
                if img is None:
                    img = Polynomial.var(f, variables, name)
                cache[key] = img ** e
            return cache[key]

        result = Polynomial.zero(f, variables)
        for m, c in self.terms.items():
            term = Polynomial.constant(f, variables, c)
            for v, e in zip(self.variables, m):
                if e:
                    term = term * power(v, e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> "Polynomial":
        """Specialize some variables to scalars; the result keeps all variables."""
        f = self.field
        idx = [(i, f.coerce(point[v])) for i, v in enumerate(self.variables) if v in point]
        terms: dict = {}
        for m, c in self.terms.items():
            m2 = list(m)
            for i, a in idx:
                if m[i]:
                    if a == 0 and m[i] < 0:
                        raise ZeroDivisionError(f"negative power of {self.variables[i]} at 0")
                    c = f.mul(c, f.pow(a, m[i]))
                m2[i] = 0
            m2 = tuple(m2)
            v = f.add(terms.get(m2, 0), c)
            if v == 0:
                terms.pop(m2, None)
            else:
                terms[m2] = v
        return self._like(terms)

    # rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = self.field
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            text = f.render(c)
            neg = text.startswith("-")
            if neg:
                text = text[1:]
            factors = []
            for v, e in zip(self.variables, m):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}" if e > 0 else f"{v}^({e})")
            if factors:
                body = "*".join(factors) if text == "1" else text + "*" + "*".join(factors)
            else:
                body = text
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, {self.variables}, {self.field})"
