"""Cancellation of a G_m factor: g_n, ρ_n, the homotopies h_{n,m} and degree classes.

A correspondence Z: G_m×X -> G_m×Y lives on G_m(f₁)×X×G_m(f₂)×Y, where f₁
and f₂ are the first coordinates of source and target.  ρ_n(Z) cuts Z (viewed
over X) with the divisor of g_n = (f₁ⁿ⁺¹ − 1)/(f₁ⁿ⁺¹ − f₂) and projects the
result to X×Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra.artinian import minimal_polynomial
from .algebra.polynomial import Polynomial
from .correspondences import Correspondence, compose, graph, identity, tensor
from .cycles import Cycle, base_change, push_forward, rebase
from .divisors import CartierDivisor, intersect, intersects_properly
from .errors import CorrError, NotFinite, SearchExhausted, WrongDimension
from .report import CheckReport, compare
from .spaces import Cell, CellMorphism, fresh_name, product

SEARCH_CAP = 64


@dataclass(frozen=True)
class GnDivisor:
    n: int
    f1: str
    f2: str
    divisor: CartierDivisor

    def __str__(self) -> str:
        return f"g_{self.n} = {self.divisor}"


def _check_shape(Z: Correspondence) -> None:
    for cell, role in ((Z.source, "source"), (Z.target, "target")):
        if cell.is_point or not cell.coords[0].multiplicative:
            raise WrongDimension(f"{role} {cell} does not start with a G_m factor")


def _distinguished(Z: Correspondence) -> tuple[str, str]:
    """Names of f₁ and f₂ inside the ambient of Z."""
    _check_shape(Z)
    V = Z.ambient.variables
    return V[0], V[Z.source.dimension]


def gn(n: int, ambient: Cell, f1: str | None = None, f2: str | None = None) -> GnDivisor:
    """D(g_n) on ``ambient``; f₁, f₂ default to the first two multiplicative coordinates."""
    if n < 0:
        raise ValueError(f"g_n needs n >= 0, got {n}")
    if f1 is None or f2 is None:
        units = ambient.unit_variables
        if len(units) < 2:
            raise WrongDimension(f"{ambient} has fewer than two G_m coordinates")
        f1, f2 = f1 or units[0], f2 or units[1]
    for v in (f1, f2):
        if not ambient.coord(v).multiplicative:
            raise WrongDimension(f"{v} is not a G_m coordinate of {ambient}")
    p = ambient.var(f1) ** (n + 1)
    D = CartierDivisor(ambient, p - 1, p - ambient.var(f2))
    return GnDivisor(n, f1, f2, D)


def _homotopy_divisor(ambient: Cell, f1: str, f2: str, t: str, n: int, m: int) -> CartierDivisor:
    """D(t·g_n + (1 − t)·g_m)."""
    if n == m:
        return gn(n, ambient, f1, f2).divisor
    x, y, tt = ambient.var(f1), ambient.var(f2), ambient.var(t)
    pn, pm = x ** (n + 1), x ** (m + 1)
    num = tt * (pn - 1) * (pm - y) + (1 - tt) * (pm - 1) * (pn - y)
    return CartierDivisor(ambient, num, (pn - y) * (pm - y))


# ---------------------------------------------------------------------------
# validity and the boundary bound


@dataclass
class RhoEvidence:
    proper: bool
    finite: bool
    boundary: bool | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "proper": self.proper,
            "finite": self.finite,
            "boundary": "not computed" if self.boundary is None else self.boundary,
        }
        if self.reason:
            out["reason"] = self.reason
        return out


def _factor_cells(Z: Correspondence) -> tuple[Cell, Cell]:
    X = Z.source.sub(Z.source.variables[1:])
    Y = Z.target.sub(Z.target.variables[1:])
    return X, Y


def _over_x(Z: Correspondence) -> Cycle:
    """Z viewed as a relative 1-cycle over X."""
    return rebase(Z.cycle, Z.ambient.variables[1:Z.source.dimension])


def rho_valid(Z: Correspondence, n: int) -> RhoEvidence:
    """Properness, finiteness and (over a point) the boundary condition for ρ_n(Z)."""
    try:
        f1, f2 = _distinguished(Z)
        W = _over_x(Z)
        D = gn(n, Z.ambient, f1, f2).divisor
        proper = intersects_properly(W, D)
    except CorrError as exc:
        return RhoEvidence(False, False, None, f"{exc.code}: {exc}")
    boundary = None
    if Z.source.dimension == 1 and Z.target.dimension == 1:
        try:
            boundary = n >= newton_bound(Z)
        except CorrError:
            boundary = None
    if not proper:
        return RhoEvidence(False, False, boundary, f"{D} does not meet Z properly over X")
    try:
        C = intersect(W, D)
    except CorrError as exc:
        return RhoEvidence(False, False, boundary, f"{exc.code}: {exc}")
    finite = all(c.finite for c in C.terms)
    return RhoEvidence(True, finite, boundary, "" if finite else "intersection is not finite over X")


def _root_slopes(coeffs: dict[int, Polynomial], f1: str) -> tuple[Fraction, Fraction]:
    """Largest v(f₂)/v(f₁) over places at f₁ = 0 and over places at f₁ = ∞.

    For a polynomial Σ a_i z^i the root valuations are minus the slopes of the
    lower Newton polygon of (i, v(a_i)); only the extreme segments matter here.
    """
    idx = sorted(coeffs)
    lo, hi = idx[0], idx[-1]
    v0 = {i: coeffs[i].low_degree(f1) for i in idx}
    vinf = {i: -coeffs[i].degree(f1) for i in idx}
    at_zero = max(Fraction(v0[lo] - v0[j], j - lo) for j in idx if j > lo)
    # at infinity w(f₁) = −1, so the relevant ratio is −(smallest root valuation)
    at_inf = max(Fraction(vinf[hi] - vinf[i], hi - i) for i in idx if i < hi)
    return at_zero, at_inf


def newton_bound(Z: Correspondence) -> int:
    """Smallest N such that every n ≥ N satisfies the boundary conditions at f₁ = 0, ∞.

    Needs (n+1)·v(f₁) > v(f₂) at places over f₁ = 0 and w(f₁ⁿ⁺¹) < w(f₂) at
    places over f₁ = ∞; with slope s this is n + 1 > s, i.e. n ≥ ⌊s⌋.
    """
    if Z.source.dimension != 1 or Z.target.dimension != 1:
        raise WrongDimension("newton_bound needs a correspondence G_m -> G_m")
    f1, f2 = _distinguished(Z)
    N = 0
    for c in Z.cycle.terms:
        if not c.finite:
            raise NotFinite(f"{c} is not finite over {f1}")
        mp = minimal_polynomial(c.ideal, Z.ambient.var(f2), (f1,))
        z = mp.variables[-1]
        if mp.degree(z) < 1:
            raise WrongDimension(f"{f2} is not algebraic over k({f1}) on {c}")
        s0, sinf = _root_slopes(mp.coefficients_in(z), f1)
        for s in (s0, sinf):
            N = max(N, s.numerator // s.denominator)
    return N


# ---------------------------------------------------------------------------
# ρ_n


@dataclass
class RhoResult:
    n: int
    evidence: RhoEvidence
    intersection: Cycle
    correspondence: Correspondence
    selected_by: str = "given"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "selected_by": self.selected_by,
            "evidence": self.evidence.to_json(),
            "intersection": self.intersection.to_json(),
            "intersection_text": str(self.intersection),
            "correspondence": self.correspondence.to_json(),
            "value": str(self.correspondence),
        }


def _project(C: Cycle, X: Cell, Y: Cell, nx: int) -> Correspondence:
    """Push a relative 0-cycle on G_m X G_m Y (over X) to X×Y."""
    A = C.ambient
    XY = product(X, Y)
    keep = A.variables[1:1 + nx] + A.variables[2 + nx:]
    p = CellMorphism(A, XY, tuple(A.var(v) for v in keep))
    return Correspondence(X, Y, push_forward(C, p, XY.variables[:nx]))


def _rho_at(Z: Correspondence, n: int) -> tuple[Cycle, Correspondence]:
    f1, f2 = _distinguished(Z)
    X, Y = _factor_cells(Z)
    C = intersect(_over_x(Z), gn(n, Z.ambient, f1, f2).divisor)
    for c in C.terms:
        if not c.finite:
            raise NotFinite(f"({c}) is not finite over X; n = {n} is too small")
    return C, _project(C, X, Y, X.dimension)


def rho(Z: Correspondence, n: int | None = None) -> RhoResult:
    """ρ_n(Z); with n omitted, n comes from newton_bound (X = pt) or a certified search."""
    _check_shape(Z)
    if n is not None:
        C, out = _rho_at(Z, n)
        boundary = None
        if Z.source.dimension == 1 and Z.target.dimension == 1:
            boundary = n >= newton_bound(Z)
        return RhoResult(n, RhoEvidence(True, True, boundary), C, out)
    if Z.source.dimension == 1:
        N = newton_bound(Z)
        C, out = _rho_at(Z, N)
        return RhoResult(N, RhoEvidence(True, True, True), C, out, "newton")
    for k in range(SEARCH_CAP + 1):
        ev = rho_valid(Z, k)
        if not (ev.proper and ev.finite):
            continue
        try:
            h = homotopy(Z, k, k + 1)
        except CorrError:
            continue
        if not h.consistent:
            continue
        C, out = _rho_at(Z, k)
        return RhoResult(k, ev, C, out, "homotopy")
    raise SearchExhausted(f"no certified n <= {SEARCH_CAP}")


# ---------------------------------------------------------------------------
# homotopies


@dataclass
class HomotopyResult:
    n: int
    m: int
    correspondence: Correspondence
    at0: Correspondence
    at1: Correspondence
    consistent: bool = field(default=False)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "correspondence": self.correspondence.to_json(),
            "at0": str(self.at0),
            "at1": str(self.at1),
            "endpoints_match_rho": self.consistent,
        }


def homotopy(Z: Correspondence, n: int, m: int) -> HomotopyResult:
    """h_{n,m}: X×A¹ -> Y cut out by t·g_n + (1 − t)·g_m, with its endpoints.

    At t = 1 the family restricts to ρ_n(Z), at t = 0 to ρ_m(Z); both are
    recomputed from scratch and compared.
    """
    if n < 0 or m < 0:
        raise ValueError("homotopy needs n, m >= 0")
    _check_shape(Z)
    f1, f2 = _distinguished(Z)
    X, Y = _factor_cells(Z)
    t = fresh_name("t", Z.ambient.variables)
    S = product(Z.source, Cell.a1(Z.field, t))
    p = CellMorphism(S, Z.source, tuple(S.var(v) for v in S.variables[:Z.source.dimension]))
    ZA = base_change(Z.cycle, p)
    A = ZA.ambient
    nx = X.dimension
    xt = A.variables[1:2 + nx]
    W = rebase(ZA, xt)
    D = _homotopy_divisor(A, f1, A.variables[S.dimension], t, n, m)
    C = intersect(W, D)
    for c in C.terms:
        if not c.finite:
            raise NotFinite(f"h_{{{n},{m}}}: ({c}) is not finite over X×A1")
    XA = product(X, Cell.a1(Z.field, t))
    XAY = product(XA, Y)
    keep = xt + A.variables[S.dimension + 1:]
    proj = CellMorphism(A, XAY, tuple(A.var(v) for v in keep))
    h = Correspondence(XA, Y, push_forward(C, proj, XAY.variables[:nx + 1]))
    at0, at1 = evaluate_at(h, 0), evaluate_at(h, 1)
    try:
        consistent = at0 == rho(Z, m).correspondence and at1 == rho(Z, n).correspondence
    except CorrError:
        consistent = False
    return HomotopyResult(n, m, h, at0, at1, consistent)


def evaluate_at(h: Correspondence, a) -> Correspondence:
    """Restriction of h: X×A¹ -> Y to X×{a}."""
    S = h.source
    if S.is_point or S.coords[-1].multiplicative:
        raise WrongDimension(f"{S} does not end with an A1 factor")
    X = S.sub(S.variables[:-1])
    images = tuple(X.var(v) for v in X.variables) + (X.constant(a),)
    incl = CellMorphism(X, S, images)
    C = base_change(h.cycle, incl)
    XY = product(X, h.target)
    return Correspondence(X, h.target, C.relabel(XY, XY.variables[:X.dimension]))


def motivic_class(Z: Correspondence) -> int:
    """Degree of ρ_N(Z) in c(pt, pt) = Z for an endocorrespondence of G_m."""
    if Z.source.dimension != 1 or Z.target.dimension != 1:
        raise WrongDimension("motivic_class needs a correspondence G_m -> G_m")
    return rho(Z, newton_bound(Z)).correspondence.degree()


# ---------------------------------------------------------------------------
# identity checks


def e_correspondence(source: Cell) -> Correspondence:
    """e_X: G_m×X -> G_m×X, (f, x) ↦ (1, x)."""
    if source.is_point or not source.coords[0].multiplicative:
        raise WrongDimension(f"{source} does not start with a G_m factor")
    images = (source.constant(1),) + tuple(source.var(v) for v in source.variables[1:])
    return graph(CellMorphism(source, source, images))


def gm_tensor(W: Correspondence, name: str = "t") -> Correspondence:
    """Id_{G_m} ⊗ W."""
    name = fresh_name(name, W.source.variables + W.target.variables)
    return tensor(identity(Cell.gm(W.field, name)), W)


def _align(a: Correspondence, b: Correspondence) -> Correspondence:
    """a rewritten positionally on b's cells when only coordinate names differ."""
    if (a.source, a.target) == (b.source, b.target):
        return a
    return Correspondence(b.source, b.target, a.cycle.relabel(b.ambient, b.ambient.variables[:b.source.dimension]))


def verify_rho_str(W: Correspondence, n: int) -> CheckReport:
    """ρ_n(Id_{G_m} ⊗ W) = W."""
    return compare(f"rho_{n}(Id (x) W) = W", lambda: _align(rho(gm_tensor(W), n).correspondence, W), lambda: W)


def verify_rho_e(X: Cell, n: int) -> CheckReport:
    """ρ_n(e_X) = 0."""
    GX = product(Cell.gm(X.field, fresh_name("t", X.variables)), X)
    return compare(f"rho_{n}(e_X) = 0", lambda: rho(e_correspondence(GX), n).correspondence,
                   lambda: Correspondence.zero(X, X))


def verify_functor1(Z: Correspondence, W: Correspondence, n: int) -> CheckReport:
    """ρ_n(Z ∘ (Id_{G_m} ⊗ W)) = ρ_n(Z) ∘ W."""
    f1 = Z.source.coords[0].name

    def lhs():
        T = tensor(identity(Cell.gm(Z.field, f1)), W)
        if T.target != Z.source:
            T = Correspondence(T.source, Z.source, T.cycle.relabel(product(T.source, Z.source), T.cycle.base))
        return rho(compose(Z, T), n).correspondence

    def rhs():
        return compose(rho(Z, n).correspondence, W)

    return compare("functor1", lambda: _align(lhs(), rhs()), rhs)


def verify_functor3(Z: Correspondence, f: CellMorphism, n: int) -> CheckReport:
    """ρ_n(Z ⊗ f) = ρ_n(Z) ⊗ f."""
    rhs = lambda: tensor(rho(Z, n).correspondence, graph(f))
    return compare("functor3", lambda: _align(rho(tensor(Z, graph(f)), n).correspondence, rhs()), rhs)


def verify_linearity(Z1: Correspondence, Z2: Correspondence, a: int, b: int, n: int) -> CheckReport:
    """ρ_n(a·Z₁ + b·Z₂) = a·ρ_n(Z₁) + b·ρ_n(Z₂)."""
    return compare(
        "linearity",
        lambda: rho(a * Z1 + b * Z2, n).correspondence,
        lambda: a * rho(Z1, n).correspondence + b * rho(Z2, n).correspondence,
    )


def verify_class_multiplicative(Z1: Correspondence, Z2: Correspondence) -> CheckReport:
    """class(Z₁ ∘ Z₂) = class(Z₁)·class(Z₂)."""
    return compare(
        "class multiplicativity",
        lambda: motivic_class(compose(Z1, Z2)),
        lambda: motivic_class(Z1) * motivic_class(Z2),
    )

