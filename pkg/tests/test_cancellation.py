import pytest
import sympy as sp

import oracles
from conftest import QQ
from corrcancel.cancellation import (
    e_correspondence,
    gm_tensor,
    gn,
    homotopy,
    motivic_class,
    newton_bound,
    rho,
    rho_valid,
    verify_class_multiplicative,
    verify_functor1,
    verify_functor3,
    verify_linearity,
    verify_rho_e,
    verify_rho_str,
)
from corrcancel.correspondences import Correspondence, graph, identity, transpose
from corrcancel.errors import ImproperIntersection, NotFinite, WrongDimension
from corrcancel.spaces import Cell, CellMorphism

s = sp.symbols("s")


def power(field, m):
    G = Cell.gm(field, "t")
    return CellMorphism(G, G, (G.var("t") ** m,))


@pytest.mark.parametrize("m", [1, 2, 3, 4, -1, -2])
def test_class_of_power_map_matches_zero_pole_oracle(field, m):
    Z = graph(power(field, m))
    N = newton_bound(Z)
    assert motivic_class(Z) == oracles.zero_pole_class(s, s**m, s, N) == m


def test_class_of_transposed_square(field):
    Z = transpose(power(field, 2))
    N = newton_bound(Z)
    assert motivic_class(Z) == oracles.zero_pole_class(s**2, s, s, N) == 1


def test_rho_below_bound_disagrees_with_oracle():
    Z = graph(power(QQ, 2))
    assert newton_bound(Z) == 2
    assert rho(Z, 0).correspondence.degree() == oracles.zero_pole_class(s, s**2, s, 0) == 0
    assert rho(Z, 0).evidence.boundary is False
    assert rho(Z, 2).correspondence.degree() == oracles.zero_pole_class(s, s**2, s, 2) == 2
    with pytest.raises(ImproperIntersection):
        rho(Z, 1)
    ev = rho_valid(Z, 1)
    assert not ev.proper and ev.reason


def test_auto_rho_uses_newton_bound():
    r = rho(graph(power(QQ, 3)))
    assert r.selected_by == "newton" and r.n == 3 and str(r.correspondence) == "3"


def test_gn_rejects_negative_and_renders():
    A = Cell.gm(QQ, "f", "g")
    with pytest.raises(ValueError):
        gn(-1, A)
    assert "f" in str(gn(2, A))


def test_homotopy_endpoints(field):
    Z = graph(power(field, 2))
    h = homotopy(Z, 2, 3)
    assert h.consistent and str(h.at0) == str(h.at1) == "2"
    with pytest.raises(NotFinite):
        homotopy(Z, 0, 2)


def test_rho_e_vanishes_and_rho_str(field):
    assert verify_rho_e(Cell.point(field), 2)
    assert verify_rho_e(Cell.gm(field, "x"), 1)
    assert verify_rho_str(2 * identity(Cell.point(field)), 3)
    A = Cell.gm(field, "x")
    assert verify_rho_str(graph(CellMorphism(A, A, (A.var("x") ** 2,))), 2)


def test_e_correspondence_shape():
    e = e_correspondence(Cell.gm(QQ, "f"))
    assert e.source.dimension == 1 and e.degree() == 1
    assert str(e) == "[g - 1]"  # f advances to g on the target
    with pytest.raises(WrongDimension):
        e_correspondence(Cell.point(QQ))
    with pytest.raises(WrongDimension):
        motivic_class(identity(Cell.point(QQ)))


def test_gm_tensor_of_identity_is_identity():
    W = identity(Cell.point(QQ))
    assert gm_tensor(W).degree() == 1


def test_functoriality_and_linearity(field):
    Z = graph(power(field, 2))
    assert verify_functor1(Z, identity(Cell.point(field)), 2)
    assert verify_functor3(Z, CellMorphism.identity(Cell.point(field)), 2)
    assert verify_linearity(Z, graph(power(field, 3)), 2, -1, 3)
    assert verify_class_multiplicative(Z, graph(power(field, 3)))


def test_correspondence_literal_class():
    G = Cell.gm(QQ, "t")
    Z = Correspondence.from_components(G, G, [(["u - t^3"], 1)])
    assert motivic_class(Z) == 3


def test_newton_bound_is_certified_by_homotopies(field):
    # the slope criterion must agree with the direct homotopy certificate
    from corrcancel.suites import GeneratorFamily

    fam = GeneratorFamily(field, 11)
    G = fam.cell(1)
    for _ in range(12):
        Z = fam.correspondence(G, G)
        N = newton_bound(Z)
        h = homotopy(Z, N, N + 1)
        assert h.consistent and h.at0 == h.at1
