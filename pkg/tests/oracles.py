"""Independent reference computations, written directly against sympy.

None of these touch the package's Gröbner, factoring or cycle code; they are
used to derive the expected values frozen into the tests.
"""

from __future__ import annotations

from itertools import product as iproduct

import sympy as sp


def _domain(p: int):
    return sp.GF(p) if p else sp.QQ


def quotient_dimension(gens, gens_vars, p: int = 0) -> int:
    """dim_k k[vars]/(gens) by counting standard monomials of a sympy Gröbner basis."""
    G = sp.groebner(gens, *gens_vars, order="grevlex", domain=_domain(p))
    if list(G.exprs) == [1]:
        return 0
    leads = [sp.Poly(g, *gens_vars).monoms(order="grevlex")[0] for g in G.exprs]
    n = len(gens_vars)
    # zero-dimensional: every variable has a pure power among the leads
    bounds = []
    for i in range(n):
        pure = [m[i] for m in leads if all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            raise ValueError("not zero-dimensional")
        bounds.append(min(pure))
    count = 0
    for m in iproduct(*(range(b) for b in bounds)):
        if not any(all(a >= b for a, b in zip(m, lm)) for lm in leads):
            count += 1
    return count


def local_length(gens, gens_vars, point, p: int = 0, power: int = 10) -> int:
    """Length of the local ring at a rational point, as dim k[x]/(I + m^power) for large power."""
    shifted = [v - c for v, c in zip(gens_vars, point)]
    m_pow = [sp.prod(c) for c in _monomials_of_degree(shifted, power)]
    return quotient_dimension(list(gens) + m_pow, gens_vars, p)


def _monomials_of_degree(vs, d):
    if len(vs) == 1:
        return [[vs[0]] * d]
    out = []
    for k in range(d + 1):
        for rest in _monomials_of_degree(vs[1:], d - k):
            out.append([vs[0]] * k + rest)
    return out


def laurent_root_count(expr, s) -> int:
    """Number of zeros in G_m (over the algebraic closure, with multiplicity)."""
    num, den = sp.fraction(sp.together(sp.expand(expr)))
    P = sp.Poly(sp.expand(num), s)
    Q = sp.Poly(sp.expand(den), s)
    low = min(m[0] for m in P.monoms())
    low_q = min(m[0] for m in Q.monoms())
    return (P.degree() - low) - (Q.degree() - low_q)


def zero_pole_class(f1, f2, s, n: int) -> int:
    """deg div(g_n) on a rational curve s -> (f1(s), f2(s)) in G_m × G_m.

    g_n = (f1^{n+1} - 1)/(f1^{n+1} - f2); zeros minus poles inside G_m(s).
    """
    a = f1 ** (n + 1)
    return laurent_root_count(a - 1, s) - laurent_root_count(a - f2, s)


def roots_mod_p(poly, x, p: int):
    return sorted(r for r in range(p) if sp.Poly(poly, x, modulus=p).eval(r) % p == 0)
