from fractions import Fraction

import pytest
import sympy as sp

import oracles
from conftest import F7, QQ
from corrcancel.algebra.artinian import decompose_artinian, minimal_polynomial
from corrcancel.algebra.factor import factor, univariate_factor
from corrcancel.algebra.field import FieldSpec
from corrcancel.algebra.groebner import Ideal, extension_contraction
from corrcancel.algebra.parse import parse_polynomial
from corrcancel.algebra.polynomial import Polynomial
from corrcancel.errors import FieldMismatch, ScenarioError, UnknownIdentifier, WrongDimension

XY = ("x", "y")


def P(text, field=QQ, variables=XY):
    return parse_polynomial(text, field, variables)


def test_field_parsing():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("GF(7)") == F7
    assert FieldSpec.parse("F_7") == F7
    with pytest.raises(FieldMismatch):
        FieldSpec.parse("F6")
    with pytest.raises(FieldMismatch):
        FieldSpec.parse("R")


def test_scalar_arithmetic_mod_p():
    assert F7.inv(3) == 5
    assert F7.coerce(Fraction(1, 2)) == 4
    assert QQ.div(1, 3) == Fraction(1, 3)


def test_parse_and_render():
    p = P("(x + 1)^2 - 2*x")
    assert p == P("x^2 + 1")
    assert str(P("x*y - 1/2")) in ("x*y - 1/2",)
    assert P("x^-1 * x") == P("1")


def test_parse_rejects_unknown_variable():
    with pytest.raises(UnknownIdentifier):
        P("x + z")
    with pytest.raises(ScenarioError):
        P("x +* y")


def test_laurent_and_substitution():
    p = P("x^2 + x^-1")
    q = p.substitute({"x": P("y^2")}, XY)
    assert q == P("y^4 + y^-2")
    assert p.low_degree("x") == -1 and p.degree("x") == 2


def _sympy_polys(texts, field, gens):
    dom = sp.GF(field.characteristic) if field.characteristic else sp.QQ
    return sorted(str(sp.Poly(sp.sympify(t.replace("^", "**")), *gens, domain=dom).monic().as_expr()) for t in texts)


def test_reduced_groebner_matches_sympy(field):
    x, y = sp.symbols("x y")
    gens = ["x^2*y - 1", "x*y^2 - x - 1"]
    I = Ideal(field, XY, [P(g, field) for g in gens])
    dom = sp.GF(field.characteristic) if field.characteristic else sp.QQ
    G = sp.groebner([sp.sympify(g.replace("^", "**")) for g in gens], x, y, order="lex", domain=dom)
    assert _sympy_polys([str(g) for g in I.groebner("lex")], field, (x, y)) == _sympy_polys(
        [str(g) for g in G.exprs], field, (x, y)
    )


@pytest.mark.parametrize(
    "gens",
    [["x*y", "x - y"], ["y^2", "y - x^2"], ["x^2*y", "x + y - 1"], ["x^3 - 2", "y^2 - x"]],
)
def test_quotient_dimension_matches_oracle(gens, field):
    x, y = sp.symbols("x y")
    exprs = [sp.sympify(g.replace("^", "**")) for g in gens]
    I = Ideal(field, XY, [P(g, field) for g in gens])
    assert I.quotient_dimension() == oracles.quotient_dimension(exprs, [x, y], field.characteristic)


def test_saturation_and_membership():
    I = Ideal(QQ, XY, [P("x*y"), P("x^2")])
    S = I.saturate(P("x"))
    assert S.is_unit()
    J = Ideal(QQ, XY, [P("x*(y - 1)")])
    assert J.saturate(P("x")).contains(P("y - 1"))


def test_unit_variables_are_saturated():
    # x is a unit on G_m, so (x*y) equals (y)
    I = Ideal(QQ, XY, [P("x*y")], unit_variables=("x",))
    assert I == Ideal(QQ, XY, [P("y")], unit_variables=("x",))


def test_factor_over_q_and_f7():
    facs = univariate_factor(P("x^3 - 1", QQ, ("x",)), "x")
    assert sorted(f.degree("x") for f, _ in facs) == [1, 2]
    facs7 = univariate_factor(P("x^3 - 1", F7, ("x",)), "x")
    # cube roots of unity lie in F7
    assert sorted(f.degree("x") for f, _ in facs7) == [1, 1, 1]
    x = sp.symbols("x")
    assert oracles.roots_mod_p(x**3 - 1, x, 7) == [1, 2, 4]


def test_multivariate_factor_multiplicities():
    const, facs = factor(P("x^2*y^2 - 2*x*y^2 + y^2"))
    assert sorted((f.total_degree(), e) for f, e in facs) == [(1, 2), (1, 2)]


def test_minimal_polynomial_over_parameter_field():
    # y^2 = x over k(x): minimal polynomial of y is z^2 - x
    I = Ideal(QQ, XY, [P("y^2 - x")])
    mp = minimal_polynomial(I, P("y"), ["x"])
    z = mp.variables[-1]
    assert mp.degree(z) == 2
    expected = Polynomial.var(QQ, mp.variables, z, 2) - Polynomial.var(QQ, mp.variables, "x")
    assert mp == expected or mp == -expected


def test_minimal_polynomial_f7_matches_resultant():
    # y^3 = x^2 + 1, minimal polynomial of y + x over F7(x) has degree 3
    I = Ideal(F7, XY, [P("y^3 - x^2 - 1", F7)])
    mp = minimal_polynomial(I, P("x + y", F7), ["x"])
    z = mp.variables[-1]
    x, y, zz = sp.symbols("x y zz")
    res = sp.resultant(y**3 - x**2 - 1, zz - x - y, y)
    ours = sp.sympify(str(mp).replace("^", "**").replace(z, "zz"))
    ratio = sp.Poly(res, zz, x, modulus=7).monic() - sp.Poly(ours, zz, x, modulus=7).monic()
    assert ratio.is_zero


def test_artinian_decomposition_lengths_match_local_oracle(field):
    x, y = sp.symbols("x y")
    gens = ["x^2*y", "x + y - 1"]
    I = Ideal(field, XY, [P(g, field) for g in gens])
    dec = decompose_artinian(I)
    got = sorted((f.length, f.residue_degree) for f in dec.factors)
    exprs = [x**2 * y, x + y - 1]
    expected = sorted([(oracles.local_length(exprs, [x, y], (0, 1), field.characteristic), 1),
                       (oracles.local_length(exprs, [x, y], (1, 0), field.characteristic), 1)])
    assert got == expected == [(1, 1), (2, 1)]


def test_artinian_decomposition_residue_degrees():
    I = Ideal(QQ, ("x",), [P("(x^2 + 1)*(x - 3)^2", QQ, ("x",))])
    dec = decompose_artinian(I)
    assert sorted((f.length, f.residue_degree) for f in dec.factors) == [(1, 2), (2, 1)]
    assert dec.check()


def test_artinian_without_coordinate_generator_f7():
    # four points over F7 with coinciding coordinates, no coordinate is primitive
    I = Ideal(F7, XY, [P("x^2 - 1", F7), P("y^2 - 4", F7)])
    dec = decompose_artinian(I)
    assert sorted((f.length, f.residue_degree) for f in dec.factors) == [(1, 1)] * 4


def test_artinian_rejects_positive_dimension():
    with pytest.raises(WrongDimension):
        decompose_artinian(Ideal(QQ, XY, [P("x*y - 1")]))


def test_extension_contraction_drops_embedded_parameter_locus():
    # (x*y, x*(y - 1)) over k(x) is (y, y - 1) = unit
    I = Ideal(QQ, XY, [P("x*y"), P("x*(y - 1)")])
    assert extension_contraction(I, ["x"]).is_unit()
