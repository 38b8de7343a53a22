import pytest

from conftest import F7, QQ
from corrcancel.errors import FieldMismatch, InvalidMorphism
from corrcancel.spaces import Cell, CellMorphism, compose_morphisms, fresh_name, product, product_morphism


def test_cells_and_units():
    X = Cell.gm(QQ, "t") * Cell.a1(QQ, "x")
    assert X.variables == ("t", "x")
    assert X.unit_variables == ("t",)
    assert X.is_unit(X.parse("2*t^-3"))
    assert not X.is_unit(X.parse("x"))
    assert X.is_regular(X.parse("t^-1*x"))
    assert not X.is_regular(X.parse("x^-1"))
    assert str(Cell.point(QQ)) == "pt"


def test_product_renames_clashing_coordinates():
    G = Cell.gm(QQ, "t")
    assert product(G, G).variables == ("t", "u")
    GG = Cell.gm(QQ, "t", "s")
    assert len(set(product(GG, GG).variables)) == 4
    assert fresh_name("t", ["t", "u"]) not in ("t", "u")


def test_duplicate_coordinates_rejected():
    with pytest.raises(ValueError):
        Cell.gm(QQ, "t", "t")


def test_morphism_validation():
    G, A = Cell.gm(QQ, "t"), Cell.a1(QQ, "x")
    CellMorphism(A, A, (A.parse("x^2 + 1"),))
    CellMorphism(G, A, (G.parse("t^-1"),))
    with pytest.raises(InvalidMorphism):
        CellMorphism(A, G, (A.parse("x"),))  # x is not a unit on A1
    with pytest.raises(InvalidMorphism):
        CellMorphism(A, A, (A.parse("x^-1"),))
    with pytest.raises(InvalidMorphism):
        CellMorphism(G, G, ())
    with pytest.raises(FieldMismatch):
        CellMorphism(Cell.gm(QQ, "t"), Cell.gm(F7, "t"), (Cell.gm(QQ, "t").var("t"),))


def test_composition_and_products():
    G = Cell.gm(QQ, "t")
    sq = CellMorphism(G, G, (G.parse("t^2"),))
    inv = CellMorphism(G, G, (G.parse("t^-1"),))
    assert compose_morphisms(inv, sq).images == (G.parse("t^-2"),)
    assert compose_morphisms(sq, CellMorphism.identity(G)) == sq
    pm = product_morphism(sq, inv)
    assert pm.source.dimension == 2
    u = pm.source.variables[1]
    assert pm.images == (pm.source.parse("t^2"), pm.source.parse(f"{u}^-1"))


def test_points_and_projections():
    X = Cell.gm(QQ, "s", "t")
    p = CellMorphism.projection(X, ["t"])
    assert p.target.variables == ("t",)
    pt = CellMorphism.point_of(X, [2, 3])
    assert pt.source.is_point
    with pytest.raises(InvalidMorphism):
        CellMorphism.point_of(X, [0, 1])  # 0 is not in G_m
