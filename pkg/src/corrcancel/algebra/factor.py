"""Polynomial factorization over k and over rational function fields k(params).

Factoring in k(params)[y] reduces to factoring in k[params, y] (Gauss's
lemma); the multivariate factorization itself is delegated to FLINT.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint

from ..errors import UnsupportedBase
from .field import FieldSpec
from .polynomial import Polynomial


def _context(field: FieldSpec, n: int):
    names = tuple(f"x{i}" for i in range(n))
    if field.characteristic == 0:
        return flint.fmpq_mpoly_ctx.get(names)
    return flint.nmod_mpoly_ctx.get(names, modulus=field.characteristic)


def _to_flint_scalar(field: FieldSpec, c):
    if field.characteristic == 0:
        return flint.fmpq(c.numerator, c.denominator)
    return int(c)


def _from_flint_scalar(field: FieldSpec, c):
    if field.characteristic == 0:
        return Fraction(int(c.numerator), int(c.denominator))
    return int(c) % field.characteristic


def _univariate_large_prime(p: Polynomial, i: int):
    field = p.field
    mod = field.characteristic
    deg = p.degree(p.variables[i])
    coeffs = [0] * (deg + 1)
    for m, c in p.terms.items():
        coeffs[m[i]] = int(c)
    const, facs = flint.nmod_poly(coeffs, mod).factor()
    out = []
    for f, e in facs:
        terms = {}
        for k, c in enumerate(f.coeffs()):
            if int(c):
                mono = [0] * len(p.variables)
                mono[i] = k
                terms[tuple(mono)] = int(c) % mod
        out.append((Polynomial(field, p.variables, terms), int(e)))
    return int(const) % mod, out


def factor(p: Polynomial) -> tuple:
    """Factor ``p`` over its field into irreducibles.

    Returns ``(unit, [(factor, multiplicity), ...])`` with every factor
    normalized to have lexicographic leading coefficient 1; the factors are
    pairwise distinct and ``unit * prod(f**e)`` equals ``p``.
    """
    if not p:
        raise ValueError("cannot factor zero")
    field = p.field
    if p.has_negative_exponents():
        raise ValueError("factor expects a polynomial without negative exponents")
    used = [i for i, v in enumerate(p.variables) if v in p.used_variables()]
    if not used:
        return p.constant_value(), []
    ctx = _context(field, len(used))
    data = {tuple(m[i] for i in used): _to_flint_scalar(field, c) for m, c in p.terms.items()}
    try:
        const, facs = ctx.from_dict(data).factor()
    except OverflowError:
        if len(used) == 1:
            return _normalized(p, *_univariate_large_prime(p, used[0]))
        raise UnsupportedBase(
            f"multivariate factorization over F_{field.characteristic} exceeds the supported modulus size"
        ) from None
    n = len(p.variables)
    out = []
    for f, e in facs:
        terms = {}
        for mono, c in f.to_dict().items():
            full = [0] * n
            for j, i in enumerate(used):
                full[i] = int(mono[j])
            terms[tuple(full)] = _from_flint_scalar(field, c)
        out.append((Polynomial(field, p.variables, terms), int(e)))
    return _normalized(p, _from_flint_scalar(field, const), out)


def _normalized(p: Polynomial, const, facs):
    field = p.field
    out = []
    for f, e in facs:
        _, lc = f.leading_term()
        const = field.mul(const, field.pow(lc, e))
        out.append((f.monic(), e))
    out.sort(key=lambda fe: (fe[0].total_degree(), str(fe[0])))
    return const, out


def univariate_factor(p: Polynomial, var: str | None = None, params: Sequence[str] = ()) -> list[tuple[Polynomial, int]]:
    """Irreducible factors of ``p`` as a polynomial in ``var`` over k(params).

    Factors free of ``var`` are units of k(params) and are dropped. Each factor
    is primitive in k[params][var]; with no parameters it is monic.
    """
    if var is None:
        used = p.used_variables()
        if len(used) > 1:
            raise ValueError(f"{p} is not univariate")
        var = used[0] if used else p.variables[0]
    allowed = set(params) | {var}
    extra = set(p.used_variables()) - allowed
    if extra:
        raise ValueError(f"{p} involves {sorted(extra)} besides {var} and the parameters")
    _, facs = factor(p)
    out = []
    for f, e in facs:
        if f.degree(var) <= 0:
            continue
        lc = f.leading_coefficient_in(var)
        _, c = lc.leading_term()
        out.append((f * p.field.inv(c), e))
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of ``p``."""
    _, facs = factor(p)
    out = Polynomial.one(p.field, p.variables)
    for f, _ in facs:
        out = out * f
    return out


def is_separable(f: Polynomial, var: str) -> bool:
    """An irreducible ``f`` is separable in ``var`` iff its derivative is nonzero."""
    return bool(f.derivative(var))
