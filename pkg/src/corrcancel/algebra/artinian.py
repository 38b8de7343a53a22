"""Decomposition of zero-dimensional algebras over k(params).

A = K[fiber]/J with K = k(params) splits as a product of local algebras.
For each factor we report the contracted maximal ideal (a prime of the
ambient polynomial ring), its local length and its residue degree over K.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..errors import DegenerateCoordinates, UnsupportedBase, WrongDimension
from .factor import is_separable, univariate_factor
from .field import FieldSpec
from .funcfield import FiniteAlgebra, FunctionField
from .groebner import INFINITE, Ideal, extension_contraction, function_field_basis
from .polynomial import Polynomial

MAX_ATTEMPTS = 8
MAX_KRYLOV = 512


@dataclass(frozen=True)
class LocalFactor:
    prime: Ideal
    length: int
    residue_degree: int


@dataclass(frozen=True)
class ArtinianDecomposition:
    field: FieldSpec
    params: tuple[str, ...]
    dimension: int
    factors: tuple[LocalFactor, ...]

    @property
    def coefficient_field(self) -> str:
        return str(self.field) + (f"({','.join(self.params)})" if self.params else "")

    def check(self) -> bool:
        return sum(f.length * f.residue_degree for f in self.factors) == self.dimension


def _split(ideal: Ideal, params):
    pset = set(params)
    params = tuple(v for v in ideal.variables if v in pset)
    fiber = tuple(v for v in ideal.variables if v not in pset)
    return params, fiber


def minimal_polynomial(ideal: Ideal, target: Polynomial, params: Sequence[str] = ()) -> Polynomial:
    """Minimal polynomial over k(params) of ``target`` in the zero-dimensional quotient.

    Found as the first linear relation among the normal forms of 1, λ, λ², ...
    over K = k(params).  The result is a primitive polynomial in k[params][z]
    written in the ambient variables followed by a fresh last variable ``z``.
    """
    params, fiber = _split(ideal, params)
    field = ideal.field
    basis = function_field_basis(ideal.generators, [fiber], params, field)
    if not basis:
        raise WrongDimension("element is not algebraic over the base")
    A = FiniteAlgebra(FunctionField(field, params), fiber, basis)
    coeffs = A.minimal_polynomial(A.reduce(A.element(target.embed(ideal.variables))), MAX_KRYLOV)
    if coeffs is None:
        raise WrongDimension("element is not algebraic over the base")
    z = "_z"
    while z in ideal.variables:
        z += "_"
    ext = ideal.variables + (z,)
    out = Polynomial.zero(field, ext)
    for j, coeff in coeffs.items():
        out = out + coeff.embed(ext) * Polynomial.var(field, ext, z, j)
    return out


def _radical_generators(ideal: Ideal, params, fiber):
    """Squarefree parts of the minimal polynomials of the fiber coordinates."""
    out = {}
    for y in fiber:
        mp = minimal_polynomial(ideal, Polynomial.var(ideal.field, ideal.variables, y), params)
        z = mp.variables[-1]
        facs = univariate_factor(mp, z, params)
        for f, _ in facs:
            if not is_separable(f, z):
                raise UnsupportedBase(f"inseparable factor {f} over {ideal.field}({','.join(params)})")
        out[y] = (mp, facs)
    return out


def _random_form(fiber, field, variables, rng, degree):
    lam = Polynomial.zero(field, variables)
    for y in fiber:
        lam = lam + Polynomial.var(field, variables, y) * field.random_element(rng, bound=5)
    if degree > 1:
        for y in fiber:
            lam = lam + Polynomial.var(field, variables, y) ** 2 * field.random_element(rng, bound=3)
    return lam


def _compose(phi: Polynomial, lam: Polynomial) -> Polynomial:
    """phi(lam) where phi is in (ambient..., z) and lam lives in the ambient ring."""
    z = phi.variables[-1]
    ambient = lam.variables
    return phi.substitute({z: lam}, ambient)


def decompose_artinian(ideal: Ideal, params: Sequence[str] = (), rng: random.Random | None = None) -> ArtinianDecomposition:
    """Local factors of k(params)[fiber]/J.

    Raises :class:`WrongDimension` if the quotient is not finite over k(params)
    and :class:`DegenerateCoordinates` if no primitive element was found.
    """
    params, fiber = _split(ideal, params)
    field = ideal.field
    V = ideal.variables
    D = ideal.quotient_dimension(params)
    if D == INFINITE:
        raise WrongDimension(f"{ideal} is not zero-dimensional over k({','.join(params)})")
    if D == 0:
        return ArtinianDecomposition(field, params, 0, ())
    if not fiber:
        return ArtinianDecomposition(field, params, 1, (LocalFactor(ideal, 1, 1),))
    rng = rng or random.Random(0x5EED)

    minpolys = _radical_generators(ideal, params, fiber)

    # a coordinate already generating the whole algebra
    for y, (mp, facs) in minpolys.items():
        z = mp.variables[-1]
        if mp.degree(z) == D:
            yv = Polynomial.var(field, V, y)
            factors = []
            for f, e in facs:
                fy = _compose(f, yv)
                prime = extension_contraction(ideal.with_generators([fy]), params)
                factors.append(LocalFactor(prime, e, f.degree(z)))
            return _checked(ArtinianDecomposition(field, params, D, tuple(factors)))

    # a reducible minimal polynomial splits the algebra (Chinese remainders)
    for y, (mp, facs) in minpolys.items():
        if len(facs) > 1:
            yv = Polynomial.var(field, V, y)
            factors = []
            for f, e in facs:
                piece = ideal.with_generators([_compose(f, yv) ** e])
                factors.extend(decompose_artinian(piece, params, rng).factors)
            return _checked(ArtinianDecomposition(field, params, D, tuple(factors)))

    rad_gens = []
    for y, (mp, facs) in minpolys.items():
        z = mp.variables[-1]
        sq = Polynomial.one(field, mp.variables)
        for f, _ in facs:
            sq = sq * f
        rad_gens.append(_compose(sq, Polynomial.var(field, V, y)))
    R = ideal.with_generators(rad_gens)
    D_red = R.quotient_dimension(params)

    candidates = []
    for y, (mp, facs) in minpolys.items():
        z = mp.variables[-1]
        if sum(f.degree(z) for f, _ in facs) == D_red:
            candidates.append(Polynomial.var(field, V, y))
    lam = mu_factors = None
    if candidates:
        lam = candidates[0]
        mp, facs = minpolys[lam.used_variables()[0]]
        mu_factors = [f for f, _ in facs]
    else:
        for attempt in range(MAX_ATTEMPTS):
            trial = _random_form(fiber, field, V, rng, 1 if attempt < MAX_ATTEMPTS // 2 else 2)
            mu = minimal_polynomial(R, trial, params)
            z = mu.variables[-1]
            if mu.degree(z) == D_red:
                facs = univariate_factor(mu, z, params)
                lam, mu_factors = trial, [f for f, _ in facs]
                break
    if lam is None:
        raise DegenerateCoordinates(f"no primitive element found for {ideal} after {MAX_ATTEMPTS} attempts")

    factors = []
    for f in mu_factors:
        z = f.variables[-1]
        fl = _compose(f, lam)
        prime = extension_contraction(R.with_generators([fl]), params)
        deg = f.degree(z)
        if D == D_red:
            length = 1
        elif len(mu_factors) == 1:
            length = D // deg
        else:
            rest = ideal.saturate(fl).quotient_dimension(params)
            length = (D - rest) // deg
        factors.append(LocalFactor(prime, length, deg))
    return _checked(ArtinianDecomposition(field, params, D, tuple(factors)))


def _checked(dec: ArtinianDecomposition) -> ArtinianDecomposition:
    if not dec.check():
        raise DegenerateCoordinates(
            f"length bookkeeping failed: {[(f.length, f.residue_degree) for f in dec.factors]} vs {dec.dimension}"
        )
    return dec


def quotient_dimension(ideal: Ideal, params: Sequence[str] = ()):
    return ideal.quotient_dimension(params)
