import pytest
import sympy as sp

import oracles
from conftest import F7, QQ
from corrcancel.cycles import (
    Cycle,
    ambient_ideal,
    base_change,
    cycl_of_ideal,
    degree_over_base,
    external_product,
    fundamental_cycle,
    is_finite_over,
    push_forward,
    rebase,
    validate_component,
)
from corrcancel.errors import NotDominant, NotFinite, NotPrime
from corrcancel.spaces import Cell, CellMorphism


def test_cycle_of_fat_point_matches_length_oracle(field):
    A = Cell.a1(field, "x", "y")
    C = cycl_of_ideal(ambient_ideal(A, [A.parse("x*y"), A.parse("x - y")]), A)
    x, y = sp.symbols("x y")
    n = oracles.local_length([x * y, x - y], [x, y], (0, 0), field.characteristic)
    assert n == 2
    assert str(C) == "2*[x, y]"
    assert C.degree() == n


def test_cycle_of_reducible_curve():
    A = Cell.a1(QQ, "x", "y")
    C = cycl_of_ideal(ambient_ideal(A, [A.parse("x^2*y^3")]), A, (), 1)
    assert sorted(C.terms.values()) == [2, 3]


def test_residue_degree_counts_in_degree():
    G = Cell.gm(QQ, "t")
    C = cycl_of_ideal(ambient_ideal(G, [G.parse("t^2 + 1")]), G)
    assert degree_over_base(C) == 2
    G7 = Cell.gm(F7, "t")
    # t^2 + 1 stays irreducible mod 7 (7 = 3 mod 4)
    C7 = cycl_of_ideal(ambient_ideal(G7, [G7.parse("t^2 + 1")]), G7)
    assert len(C7.terms) == 1 and degree_over_base(C7) == 2
    t = sp.symbols("t")
    assert oracles.roots_mod_p(t**2 + 1, t, 7) == []


def test_validate_component_errors():
    XY = Cell.gm(QQ, "t", "u")
    validate_component([XY.parse("u - t^2")], XY, ["t"], expect_finite=True)
    with pytest.raises(NotPrime):
        validate_component([XY.parse("u^2 - t^2")], XY, ["t"])
    with pytest.raises(NotDominant):
        validate_component([XY.parse("t - 1")], XY, ["t"])
    with pytest.raises(NotFinite):
        # t*u - 1 is finite, but (t - 1)*u - 1 has a fiber at infinity over t = 1
        validate_component([XY.parse("(t - 1)*u - 1")], XY, ["t"], expect_finite=True)


def test_finiteness():
    XY = Cell.gm(QQ, "t").__mul__(Cell.a1(QQ, "y"))
    assert is_finite_over(ambient_ideal(XY, [XY.parse("y^2 - t")]), ["t"])
    assert is_finite_over(ambient_ideal(XY, [XY.parse("t*y - 1")]), ["t"])  # t is a unit
    assert not is_finite_over(ambient_ideal(XY, [XY.parse("(t - 1)*y - 1")]), ["t"])


def test_push_forward_scales_by_degree(field):
    G, U = Cell.gm(field, "t"), Cell.gm(field, "u")
    f = CellMorphism(G, U, (G.parse("t^3"),))
    pt_cycle = cycl_of_ideal(ambient_ideal(G, [G.parse("t - 2")]), G)
    pushed = push_forward(pt_cycle, f, ())
    assert pushed.degree() == 1
    assert push_forward(fundamental_cycle(G), f, ()) == 3 * fundamental_cycle(U)


def test_base_change_to_point(field):
    XY = Cell.gm(field, "s", "u")
    Z = Cycle.of(validate_component([XY.parse("u^2 - s")], XY, ["s"]))
    pt = CellMorphism.point_of(Z.base_cell, [4])
    Z4 = base_change(Z, pt)
    assert Z4.degree() == 2
    assert len(Z4.terms) == 2  # u = 2 and u = -2


def test_rebase_and_external_product():
    XY = Cell.gm(QQ, "s", "u")
    Z = Cycle.of(validate_component([XY.parse("u - s")], XY, ["s"]))
    R = rebase(Z, [])
    assert R.r == 1
    G = Cell.gm(QQ, "t")
    a = cycl_of_ideal(ambient_ideal(G, [G.parse("t - 2")]), G)
    E = external_product(a, a)
    assert E.ambient.dimension == 2 and E.degree() == 1


def test_cycle_arithmetic():
    G = Cell.gm(QQ, "t")
    a = cycl_of_ideal(ambient_ideal(G, [G.parse("t - 2")]), G)
    b = cycl_of_ideal(ambient_ideal(G, [G.parse("t - 3")]), G)
    assert (a + b) - b == a
    assert (2 * a - a - a).is_zero()
    assert str(Cycle.zero(G)) == "0"
