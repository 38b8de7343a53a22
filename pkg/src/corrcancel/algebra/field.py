"""Coefficient fields: the rationals and prime fields F_p with p < 2**61."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from sympy import isprime
from sympy.polys.domains import GF, QQ

from ..errors import FieldMismatch

Scalar = Union[int, Fraction]

MAX_CHARACTERISTIC = 2**61


@dataclass(frozen=True)
class FieldSpec:
    """A ground field, identified by its characteristic (0 means Q)."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (p >= MAX_CHARACTERISTIC or not isprime(p)):
            raise FieldMismatch(f"characteristic must be 0 or a prime < 2^61, got {p}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Accept ``Q``, ``QQ``, ``F7``, ``F_7``, ``GF(7)``."""
        s = text.strip().replace(" ", "")
        if s in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"(?:F_?|GF\(?)(\d+)\)?", s)
        if not m:
            raise FieldMismatch(f"unknown field {text!r}")
        return cls(int(m.group(1)))

    @property
    def kind(self) -> str:
        return "rational" if self.characteristic == 0 else "prime-field"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    # scalar arithmetic -------------------------------------------------

    def coerce(self, value) -> Scalar:
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, p)) % p
        if isinstance(value, str):
            return self.coerce(Fraction(value))
        return int(value) % p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def neg(self, a: Scalar) -> Scalar:
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return 1 / Fraction(a) if p == 0 else pow(a, -1, p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def pow(self, a: Scalar, e: int) -> Scalar:
        p = self.characteristic
        if p == 0:
            return Fraction(a) ** e
        if e < 0:
            return pow(self.inv(a), -e, p)
        return pow(a, e, p)

    def render(self, a: Scalar) -> str:
        """Balanced representative for F_p, reduced fraction for Q."""
        p = self.characteristic
        if p == 0:
            return str(a)
        return str(a - p if a > p // 2 else a)

    def random_element(self, rng, bound: int = 7) -> Scalar:
        """Nonzero small element; ``bound`` caps magnitudes over Q."""
        p = self.characteristic
        if p:
            return rng.randrange(1, min(p, 2 * bound + 2))
        v = rng.randint(-bound, bound)
        return Fraction(v or 1)

    # sympy bridge -------------------------------------------------------

    @cached_property
    def sympy_domain(self):
        return QQ if self.characteristic == 0 else GF(self.characteristic)

    def to_sympy(self, a: Scalar):
        if self.characteristic == 0:
            return self.sympy_domain(a.numerator, a.denominator)
        return self.sympy_domain(a)

    def from_sympy(self, c) -> Scalar:
        if self.characteristic == 0:
            return Fraction(int(c.numerator), int(c.denominator))
        return int(c) % self.characteristic


QQ_FIELD = FieldSpec(0)
