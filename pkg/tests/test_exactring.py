from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import naive_product, to_sympy
from poissonext.exactring import (
    AffineExpression,
    GaussianRational,
    I,
    Inconsistent,
    LinearSystem,
    ParseError,
    Polynomial,
    StructuralError,
    VariableSpace,
    format_scalar,
    grade_parts,
    inverse,
    parse_polynomial,
    parse_scalar,
    poly_arith,
    scalar,
    solve_linear,
    substitute,
)
from poissonext.invariants import hilbert_map, source_space, target_space
from strategies import SPACE4, gaussians, polynomials, rationals

XY = VariableSpace(["x", "y"])


def P(text, space=SPACE4):
    return parse_polynomial(text, space)


# scalars ----------------------------------------------------------------------


def test_scalar_canonical_form():
    z = GaussianRational(Fraction(2, 4), Fraction(-6, 3))
    assert (z.re_num, z.re_den, z.im_num, z.im_den) == (1, 2, -2, 1)
    assert scalar(GaussianRational(3, 0)) == 3
    assert isinstance(scalar(Fraction(4, 2)), int)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        scalar(0.5)


@settings(max_examples=200, deadline=None)
@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    a, b, c = scalar(a), scalar(b), scalar(c)
    assert scalar((a + b) + c) == scalar(a + (b + c))
    assert scalar(a * (b + c)) == scalar(a * b + a * c)
    assert scalar(a * b) == scalar(b * a)
    assert scalar(a * inverse(a)) == 1


@settings(max_examples=200, deadline=None)
@given(gaussians)
def test_scalar_text_round_trip(a):
    assert parse_scalar(format_scalar(a)) == scalar(a)


def test_i_squared():
    assert scalar(I * I) == -1


# polynomials ------------------------------------------------------------------


def test_difference_of_squares():
    assert poly_arith(P("x + y", XY), P("x - y", XY), "mul") == P("x^2 - y^2", XY)


def test_monomial_product():
    S = source_space()
    assert P("z*zb", S) * P("w*wb", S) ** 2 == P("z*zb*w^2*wb^2", S)


def test_cube_expansion_matches_naive_oracle():
    S = VariableSpace(["u", "v", "w"])
    base = P("u - v*w", S)
    cube = base * base * base
    naive = naive_product(naive_product(base.terms, base.terms), base.terms)
    assert cube.terms == naive
    assert cube == P("u^3 - 3*u^2*v*w + 3*u*v^2*w^2 - v^3*w^3", S)


def test_mismatched_spaces():
    with pytest.raises(StructuralError):
        poly_arith(P("x", XY), P("p", SPACE4), "add")
    # same names but different gradings are different spaces
    with pytest.raises(StructuralError):
        P("x", XY) + P("x", XY.with_gradings(t=(1, 1)))


def test_no_zero_coefficients_stored():
    p = P("p*q - p*q + r")
    assert list(p.terms) == [(0, 0, 1, 0)]
    assert Polynomial.zero(SPACE4).degree() is None


@settings(max_examples=200, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(SPACE4)


@settings(max_examples=200, deadline=None)
@given(polynomials(coeffs=gaussians), polynomials(coeffs=gaussians))
def test_product_against_sympy(a, b):
    assert to_sympy(a * b) == sp.expand(to_sympy(a) * to_sympy(b))


@settings(max_examples=200, deadline=None)
@given(polynomials(coeffs=gaussians))
def test_text_round_trip(p):
    assert parse_polynomial(str(p), SPACE4) == p


def test_term_order_is_grlex():
    p = P("p + q^2 + p*q + 1 + s^3")
    # highest total degree first, lexicographic by variable position within a degree
    assert str(p) == "s^3 + p*q + q^2 + p + 1"


def test_parse_grammar():
    S = VariableSpace(["a0", "xy_02"])
    p = parse_polynomial("(1/2+3i)*a0^2 - 2i*xy_02 + 3/4", S)
    assert p.coefficient_of((2, 0)) == GaussianRational(Fraction(1, 2), 3)
    assert p.coefficient_of((0, 1)) == GaussianRational(0, -2)
    assert p.constant_term() == Fraction(3, 4)


def test_parse_error_location():
    with pytest.raises(ParseError) as err:
        parse_polynomial("x + * y", XY)
    assert "column 5" in str(err.value)


# substitution -------------------------------------------------------------------


def test_substitute_constructed_kernel_element():
    A = VariableSpace(["u", "v", "w"])
    B = VariableSpace(["z", "w"])
    got = substitute(P("u*w - v", A), {"u": P("z^3", B), "v": P("z^3*w", B), "w": P("w", B)}, B)
    assert got.is_zero()


def test_substitute_resonance_variety():
    src = VariableSpace(["z", "zb", "w", "wb"])
    tgt = VariableSpace(["x1", "x2", "x3", "x4"])
    a, b = 1, 2
    sigma = {
        "x1": P("z*zb", src),
        "x2": P("w*wb", src),
        "x3": P("z^2*wb + zb^2*w", src),
        "x4": P("1i*z^2*wb - 1i*zb^2*w", src),
    }
    variety = P(f"x3^2 + x4^2 - 4*x1^{b}*x2^{a}", tgt)
    assert substitute(variety, sigma, src).is_zero()


def test_substitute_casimir_c():
    S = source_space()
    C = P("a0*a1 - a2*a3", target_space(3))
    assert substitute(C, hilbert_map(3, S), S).is_zero()


def test_substitute_unassigned_variable():
    with pytest.raises(StructuralError):
        substitute(P("x*y", XY), {"x": P("p", SPACE4)}, SPACE4)


@settings(max_examples=200, deadline=None)
@given(polynomials(max_deg=2, max_terms=4), polynomials(max_deg=2, max_terms=4), st.lists(polynomials(max_deg=2, max_terms=3), min_size=4, max_size=4))
def test_substitute_is_a_ring_homomorphism(a, b, images):
    sub = dict(zip(SPACE4.names, images))
    assert substitute(a * b, sub, SPACE4) == substitute(a, sub, SPACE4) * substitute(b, sub, SPACE4)
    assert substitute(a + b, sub, SPACE4) == substitute(a, sub, SPACE4) + substitute(b, sub, SPACE4)


# gradings -------------------------------------------------------------------------


def test_total_grade_parts():
    T = target_space(3)
    parts = grade_parts(P("a0*a1 + x0", T), "total")
    assert parts == {2: P("a0*a1", T), 1: P("x0", T)}


def test_t_grading_of_mixed_monomial_matches_hamiltonian_action():
    from poissonext.invariants import gl2_action

    T = target_space(3)
    m = P("x1*y2", T)
    assert grade_parts(m, "t") == {0: m}
    # t-eigenvalue from the action {a0 + a1, .}_1 (independent of the stored weights)
    assert gl2_action("t", m).is_zero()
    assert gl2_action("t", P("x1", T)) == P("-3*x1", T)


def test_h_grading_of_a0():
    T = target_space(3)
    A0 = P("3*a0*y0 - 3*a3*y1", T)
    assert grade_parts(A0, "H") == {-3: A0}


def test_unknown_grading():
    with pytest.raises(StructuralError):
        grade_parts(P("p"), "nope")


@settings(max_examples=200, deadline=None)
@given(polynomials(), st.sampled_from(["total", "t", "W"]))
def test_grade_parts_reassemble(p, g):
    parts = grade_parts(p, g)
    total = Polynomial.zero(SPACE4)
    for d, q in parts.items():
        assert q.is_homogeneous(g) and q.degree(g) == d
        total = total + q
    assert total == p


@settings(max_examples=200, deadline=None)
@given(polynomials(max_terms=1), polynomials(max_terms=1), st.sampled_from(["total", "t", "W"]))
def test_grading_is_additive_on_monomials(m1, m2, g):
    if m1 and m2:
        assert (m1 * m2).degree(g) == m1.degree(g) + m2.degree(g)


# linear solving ---------------------------------------------------------------------


def K(name):
    return AffineExpression.unknown(name)


def test_solve_single():
    sol = solve_linear(LinearSystem([K("K1") - 2]))
    assert sol.values() == {"K1": 2}


def test_solve_pair():
    sol = solve_linear(LinearSystem([K("K1") + K("K2"), K("K1") - K("K2") - 2]))
    assert sol.values() == {"K1": 1, "K2": -1}


def test_inconsistent_is_a_value():
    res = solve_linear(LinearSystem([K("K1") - 1, K("K1") - 2]))
    assert isinstance(res, Inconsistent) and not res
    assert len(res.equations) == 1


def test_free_unknowns_reported():
    sol = solve_linear(LinearSystem([K("K1") + K("K2") - 3]))
    assert sol.free == ["K2"]
    assert sol.values({"K2": 5}) == {"K1": -2, "K2": 5}


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=5),
    st.lists(rationals, min_size=4, max_size=4),
    st.lists(st.integers(0, 3), min_size=1, max_size=5),
)
def test_solutions_verify_by_back_substitution(rows, point, free_pick):
    """Systems built consistent by construction (they vanish at ``point``)."""
    names = ["K1", "K2", "K3", "K4"]
    eqs = []
    for r in rows:
        e = AffineExpression(0)
        for c, u in zip(r, names):
            e = e + K(u) * c
        val = sum(Fraction(c) * x for c, x in zip(r, point))
        eqs.append(e - val)
    sys_ = LinearSystem(eqs)
    sol = solve_linear(sys_)
    assert sol
    free_vals = {u: free_pick[i % len(free_pick)] for i, u in enumerate(sol.free)}
    vals = sol.values(free_vals)
    assert all(r == 0 for r in sys_.residuals(vals))
    # the same system with a contradictory copy of one row is inconsistent
    assert not solve_linear(LinearSystem(eqs + [eqs[0] + 1]))
