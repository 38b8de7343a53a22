"""Seeded generators and the named verification suites run by ``verify``."""

from __future__ import annotations

import random
from typing import Callable

from .algebra.field import FieldSpec
from .cancellation import (
    e_correspondence,
    gm_tensor,
    homotopy,
    motivic_class,
    newton_bound,
    rho,
    verify_functor1,
    verify_functor3,
    verify_linearity,
    verify_rho_e,
    verify_rho_str,
)
from .correspondences import (
    Correspondence,
    compose,
    graph,
    identity,
    tensor,
    transpose,
    verify_associativity,
    verify_degree_multiplicative,
    verify_graph_functor,
    verify_identity_laws,
)
from .cycles import Cycle, ambient_ideal, fundamental_cycle, push_forward, validate_component
from .divisors import CartierDivisor, verify_eqcorr, verify_eqp, verify_eqp1, verify_form1
from .errors import CorrError
from .report import CheckReport, compare
from .spaces import Cell, CellMorphism, product

NAMES = ("t", "s")


class GeneratorFamily:
    """Random correspondences between small split tori, reproducible from a seed.

    Members are graphs of monomial maps, transposes of finite diagonal covers,
    integer multiples, sums and tensor products of these.
    """

    def __init__(self, field: FieldSpec, seed: int = 0):
        self.field = field
        self.rng = random.Random(f"{seed}:{field.characteristic}")

    def cell(self, dim: int) -> Cell:
        return Cell.gm(self.field, *NAMES[:dim])

    def _exponents(self) -> list[int]:
        p = self.field.characteristic
        # keep cover degrees prime to the characteristic
        return [k for k in (1, 2, 3) if p == 0 or k % p]

    def monomial_map(self, X: Cell, Y: Cell) -> CellMorphism:
        images = []
        for _ in Y.variables:
            img = X.constant(self.rng.choice([1, 1, -1, 2]))
            for v in X.variables:
                img = img * X.var(v) ** self.rng.randint(-2, 2)
            images.append(img)
        return CellMorphism(X, Y, tuple(images))

    def cover(self, X: Cell) -> CellMorphism:
        """A finite diagonal map t_i ↦ ±t_i^{±k_i}."""
        images = []
        for v in X.variables:
            k = self.rng.choice(self._exponents()) * self.rng.choice([1, -1])
            images.append(X.constant(self.rng.choice([1, -1])) * X.var(v) ** k)
        return CellMorphism(X, X, tuple(images))

    def correspondence(self, X: Cell, Y: Cell, depth: int = 0) -> Correspondence:
        kinds = ["graph", "graph", "transpose"]
        if depth < 1:
            kinds += ["multiple", "sum"]
            if X.dimension == Y.dimension == 2:
                kinds.append("tensor")
        kind = self.rng.choice(kinds)
        if kind == "transpose" and X.dimension == Y.dimension:
            c = transpose(self.cover(Y))
            return Correspondence(X, Y, c.cycle.relabel(product(X, Y), X.variables))
        if kind == "multiple":
            return self.rng.choice([-2, -1, 2, 3]) * self.correspondence(X, Y, depth + 1)
        if kind == "sum":
            return self.correspondence(X, Y, depth + 1) + self.correspondence(X, Y, depth + 1)
        if kind == "tensor":
            a = self.correspondence(self.cell(1), self.cell(1), depth + 1)
            b = self.correspondence(self.cell(1), self.cell(1), depth + 1)
            c = tensor(a, b)
            return Correspondence(X, Y, c.cycle.relabel(product(X, Y), X.variables))
        return graph(self.monomial_map(X, Y))

    def dims(self, k: int) -> list[int]:
        return [self.rng.choice([1, 1, 1, 2]) for _ in range(k)]


def expect_error(name: str, fn: Callable, error: type, detail: str = "") -> CheckReport:
    """Pass iff ``fn`` raises ``error``; a must-fail check."""
    try:
        value = fn()
    except error as exc:
        return CheckReport(name, True, lhs=exc.code, rhs=error.code, detail=detail)
    except CorrError as exc:
        return CheckReport(name, False, lhs=exc.code, rhs=error.code, detail=detail, error=str(exc))
    return CheckReport(name, False, lhs=str(value), rhs=error.code, detail=detail)


def expect_value(name: str, fn: Callable, expected, detail: str = "") -> CheckReport:
    return compare(name, fn, lambda: expected, detail)


# ---------------------------------------------------------------------------
# shared instances


def power_map(field: FieldSpec, m: int) -> CellMorphism:
    G = Cell.gm(field, "t")
    return CellMorphism(G, G, (G.var("t") ** m,))


def stable_ws(field: FieldSpec) -> list[tuple[str, Correspondence]]:
    pt = Cell.point(field)
    A = Cell.gm(field, "x")
    one = identity(pt)
    return [
        ("1*[pt]", one),
        ("2*[pt]", 2 * one),
        ("graph(x -> x^2)", graph(CellMorphism(A, A, (A.var("x") ** 2,)))),
        ("[V(x^2+x+1)]", Correspondence.from_subscheme(pt, A, ["x^2 + x + 1"])),
    ]


def suite_str(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    out = []
    for X in (Cell.point(field), Cell.gm(field, "x")):
        for n in range(5):
            r = verify_rho_e(X, n)
            r.detail = f"X = {X}"
            out.append(r)
    for label, W in stable_ws(field):
        for n in range(1, 5):
            r = verify_rho_str(W, n)
            r.detail = f"W = {label}"
            out.append(r)
    return out


CLASS_CASES = [(f"graph(t -> t^{m})", m, m) for m in (1, 2, 3, 4)] + [("graph(t -> t^-1)", -1, -1)]


def suite_classes(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    out = []
    for label, m, expected in CLASS_CASES:
        out.append(expect_value(f"class {label}", lambda m=m: motivic_class(graph(power_map(field, m))), expected))
    out.append(expect_value("class transpose(t -> t^2)", lambda: motivic_class(transpose(power_map(field, 2))), 1))
    return out


def suite_bound(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    """The squaring graph below and above its bound."""
    from .errors import ImproperIntersection, NotFinite

    Z = graph(power_map(field, 2))

    def h23():
        h = homotopy(Z, 2, 3)
        return (str(h.at0), str(h.at1), h.consistent)

    return [
        expect_error("rho_1(sq) improper", lambda: rho(Z, 1), ImproperIntersection),
        expect_value("rho_0(sq) = 0", lambda: rho(Z, 0).correspondence.degree(), 0),
        expect_value("rho_2(sq) = 2", lambda: rho(Z, 2).correspondence.degree(), 2),
        expect_error("homotopy(sq, 0, 2) not finite", lambda: homotopy(Z, 0, 2), NotFinite),
        expect_value("homotopy(sq, 2, 3) endpoints", h23, ("2", "2", True)),
        expect_value("newton_bound(sq) = 2", lambda: newton_bound(Z), 2),
    ]


FORM1_CASES = [
    (["x*y"], "x - y"),
    (["y^2"], "y - x^2"),
    (["x^2*y"], "x + y - 1"),
]


def suite_form1(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    A = Cell.a1(field, "x", "y")
    out = []
    for gens, f in FORM1_CASES:
        r = verify_form1(ambient_ideal(A, [A.parse(g) for g in gens]), A.parse(f), A)
        r.detail = f"I = ({', '.join(gens)}), f = {f}"
        out.append(r)
    return out


def suite_pushfor(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    G, U = Cell.gm(field, "t"), Cell.gm(field, "u")
    out = []
    for k in (2, 3):
        if field.characteristic and k % field.characteristic == 0:
            continue
        f = CellMorphism(G, U, (G.var("t") ** k,))
        r = verify_eqp(f, fundamental_cycle(G), CartierDivisor.principal(U, "u - 1"))
        r.detail = f"f: t -> t^{k}"
        out.append(r)
    return out


def eqp1_points(field: FieldSpec) -> list[int]:
    return [2, -1, 3] if field.characteristic == 0 else [2, 3]


def suite_eqp1(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    fam = Cell.gm(field, "s", "t", "u")
    Z = Cycle.of(validate_component([fam.parse("u - s*t")], fam, ["s"]))
    D = CartierDivisor.principal(fam, "u - 1")
    return [verify_eqp1(Z, D, [s]) for s in eqp1_points(field)]


def eqcorr_cases(field: FieldSpec) -> list[tuple[str, Cycle, Cycle, CartierDivisor]]:
    X1, Xp = Cell.gm(field, "t"), Cell.gm(field, "t", "u")
    first = (
        "W = [X'] over t, Z = 2[t = 3], D(u - 3)",
        fundamental_cycle(Xp, ["t"]),
        2 * Cycle.of(validate_component([X1.parse("t - 3")], X1, [])),
        CartierDivisor.principal(Xp, "u - 3"),
    )
    Xs, Xq = Cell.gm(field, "s"), Cell.gm(field, "s", "t", "u")
    second = (
        "W = [u^2 - t] over s, Z = [Gm], D(u - 2)",
        Cycle.of(validate_component([Xq.parse("u^2 - t")], Xq, ["s"])),
        fundamental_cycle(Xs),
        CartierDivisor.principal(Xq, "u - 2"),
    )
    return [first, second]


def suite_eqcorr(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    out = []
    for label, W, Z, D in eqcorr_cases(field):
        r = verify_eqcorr(W, Z, D)
        r.detail = label
        out.append(r)
    return out


def suite_assoc(field: FieldSpec, seed: int = 0, count: int = 50) -> list[CheckReport]:
    fam = GeneratorFamily(field, seed)
    out = []
    for i in range(count):
        d = fam.dims(4)
        cells = [fam.cell(k) for k in d]
        f, g, h = (fam.correspondence(cells[j], cells[j + 1]) for j in range(3))
        r = verify_associativity(f, g, h)
        r.detail = f"triple {i}"
        out.append(r)
        r = verify_identity_laws(f)
        r.detail = f"triple {i}"
        out.append(r)
    for i in range(count):
        d = fam.dims(3)
        X, Y, Z = (fam.cell(k) for k in d)
        r = verify_graph_functor(fam.monomial_map(X, Y), fam.monomial_map(Y, Z))
        r.detail = f"pair {i}"
        out.append(r)
    return out


def suite_functor(field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    pt = Cell.point(field)
    A = Cell.gm(field, "x")
    one = identity(pt)
    sq = graph(power_map(field, 2))
    cube = CellMorphism(A, A, (A.var("x") ** 3,))
    G = Cell.gm(field, "t")
    return [
        verify_functor1(gm_tensor(2 * one), one, 2),
        verify_functor1(sq, 3 * one, 2),
        verify_functor1(gm_tensor(identity(A)), graph(CellMorphism(A, A, (A.var("x") ** 2,))), 1),
        verify_functor3(sq, CellMorphism.identity(pt), 2),
        verify_functor3(sq, cube, 2),
        verify_functor3(e_correspondence(G), cube, 1),
        verify_linearity(sq, graph(power_map(field, 3)), 2, -1, 3),
    ]


def suite_degree(field: FieldSpec, seed: int = 0, count: int = 50) -> list[CheckReport]:
    fam = GeneratorFamily(field, seed + 1)
    out = []
    for i in range(count):
        X, Y, Z = (fam.cell(k) for k in fam.dims(3))
        r = verify_degree_multiplicative(fam.correspondence(X, Y), fam.correspondence(Y, Z))
        r.detail = f"pair {i}"
        out.append(r)
    for i in range(count):
        X, Y, Y2 = (fam.cell(k) for k in fam.dims(3))
        c = fam.correspondence(X, Y)
        phi = fam.monomial_map(Y, Y2)
        out.append(_push_degree(c, phi, i))
    return out


def _push_degree(c: Correspondence, phi: CellMorphism, i: int) -> CheckReport:
    """degree_over_base is unchanged by pushing along id_X × φ."""
    X = c.source
    A = c.ambient
    T = product(X, phi.target)
    ren = dict(zip(phi.source.variables, A.variables[X.dimension:]))
    images = tuple(A.var(v) for v in X.variables) + tuple(img.rename(ren).embed(A.variables) for img in phi.images)
    p = CellMorphism(A, T, images)
    return compare(
        "push preserves degree",
        lambda: push_forward(c.cycle, p, T.variables[:X.dimension]).degree(),
        lambda: c.cycle.degree(),
        detail=f"cycle {i}",
    )


SUITES: dict[str, Callable[..., list[CheckReport]]] = {
    "str": suite_str,
    "classes": suite_classes,
    "bound": suite_bound,
    "form1": suite_form1,
    "pushfor": suite_pushfor,
    "eqp1": suite_eqp1,
    "eqcorr": suite_eqcorr,
    "assoc": suite_assoc,
    "functor": suite_functor,
    "degree": suite_degree,
}


def run_suite(name: str, field: FieldSpec, seed: int = 0) -> list[CheckReport]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    out = SUITES[name](field, seed)
    for r in out:
        r.name = f"{name}: {r.name}"
    return out
