from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from covforge.exact import (Context, ContextError, MultiPoly, ParseError, RatMatrix, UnknownVariable,
                            VarFamily, matrix_kernel, matrix_rank, modular_rank, parse_poly,
                            squarefree_decomposition, univariate_gcd)
from covforge.exact.matrix import bareiss_rank, rational_det


CTX = Context([VarFamily.flat("a", 3), VarFamily("x", (1, 2))])
NAMES = CTX.names


def to_sympy(P: MultiPoly):
    syms = sympy.symbols(P.ctx.names)
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
                       for e, c in P.terms.items()])


def from_sympy(expr, ctx):
    expr = sympy.expand(expr)
    if expr == 0:
        return MultiPoly.zero(ctx)
    poly = sympy.Poly(expr, *sympy.symbols(ctx.names))
    return MultiPoly(ctx, {e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()})


monomials = st.tuples(*[st.integers(0, 2) for _ in NAMES])
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(monomials, coeffs, max_size=5).map(lambda t: MultiPoly(CTX, t))


# -- arithmetic -----------------------------------------------------------------

def test_binomial_square():
    assert parse_poly("x1 + x2") ** 2 == parse_poly("x1^2 + 2*x1*x2 + x2^2")


def test_additive_inverse_is_empty():
    P = parse_poly("3*a0*x1 - 1/2*a1")
    Z = P + (-P)
    assert Z.is_zero() and Z.terms == {}


def test_difference_of_squares():
    ctx = Context([VarFamily.flat("a", 2), VarFamily("x", (1, 2))])
    A = parse_poly("a0*x1 + a1*x2", ctx)
    B = parse_poly("a0*x1 - a1*x2", ctx)
    assert A * B == parse_poly("a0^2*x1^2 - a1^2*x2^2", ctx)


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        parse_poly("x1") ** -1


def test_context_mismatch_without_union():
    P = parse_poly("a0", Context([VarFamily.flat("a", 1)]))
    Q = parse_poly("b0", Context([VarFamily.flat("b", 1)]))
    with pytest.raises(ContextError):
        P + Q


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(P, Q, R):
    assert (P * Q) * R == P * (Q * R)
    assert P * (Q + R) == P * Q + P * R
    assert P * Q == Q * P
    assert P + Q == Q + P


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_product_against_sympy(P, Q):
    assert from_sympy(to_sympy(P) * to_sympy(Q), CTX) == P * Q


# -- calculus ---------------------------------------------------------------------

def test_diff_examples():
    assert parse_poly("x1^3").diff("x1") == parse_poly("3*x1^2")
    ctx = Context([VarFamily("x", (1, 2))])
    assert parse_poly("x1^3", ctx).diff("x2").is_zero()
    assert parse_poly("a0*a2 - a1^2").diff("a1") == parse_poly("-2*a1", parse_poly("a0*a2 - a1^2").ctx)


def test_diff_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_poly("x1^2").diff("y1")


@settings(max_examples=40, deadline=None)
@given(polys)
def test_diff_against_sympy(P):
    for i, name in enumerate(NAMES):
        expect = from_sympy(sympy.diff(to_sympy(P), sympy.Symbol(name)), CTX)
        assert P.diff(name) == expect


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_diff_commutes_with_substitution(P, S):
    # substitute a0 -> S with S free of x1; then d/dx1 commutes
    S = MultiPoly(CTX, {e: c for e, c in S.terms.items() if e[NAMES.index("x1")] == 0})
    lhs = P.subs({"a0": S}).diff("x1")
    rhs = P.diff("x1").subs({"a0": S})
    assert lhs == rhs


def test_substitute_on_line():
    ctx = Context([VarFamily("x", (1,)), VarFamily("l", (1, 2)), VarFamily("p", (1,)), VarFamily("q", (1,))])
    P = parse_poly("x1^2", ctx)
    bind = {"x1": parse_poly("l1*p1 + l2*q1", ctx)}
    assert P.subs(bind) == parse_poly("l1^2*p1^2 + 2*l1*l2*p1*q1 + l2^2*q1^2", ctx)


def test_identity_substitution():
    P = parse_poly("a0*x1^2 - 3*a2*x1*x2")
    assert P.subs({v: MultiPoly.var(P.ctx, v) for v in P.ctx.names}) == P


def test_swap_substitution_d2():
    ctx = Context([VarFamily.flat("a", 3), VarFamily("x", (1, 2))])
    F = parse_poly("a0*x1^2 + 2*a1*x1*x2 + a2*x2^2", ctx)
    G = F.subs({"x1": MultiPoly.var(ctx, "x2"), "x2": -MultiPoly.var(ctx, "x1")})
    assert G == parse_poly("a2*x1^2 - 2*a1*x1*x2 + a0*x2^2", ctx)


def test_coeff_extraction():
    F = parse_poly("a0*x1^2 + 2*a1*x1*x2 + a2*x2^2")
    assert str(F.coeff("x", (2, 0))) == "a0"
    assert str(F.coeff("x", (1, 1))) == "2*a1"


def test_parse_grammar():
    P = parse_poly(" 2*a0^2*a3 - 3*a0*a1*a2 ")
    assert P.total_degree() == 3
    assert parse_poly("y_0_1*z_1_2").variables() == {"y_0_1", "z_1_2"}
    with pytest.raises(ParseError):
        parse_poly("2**x1")


def test_print_is_deterministic():
    a = str(parse_poly("x2 + x1^2 - 1/3"))
    b = str(parse_poly("-1/3 + x1^2 + x2"))
    assert a == b


# -- matrices -------------------------------------------------------------------------

def test_matrix_examples():
    I = RatMatrix.identity(2)
    assert matrix_rank(I) == 2 and matrix_kernel(I) == []
    Z = RatMatrix(3, 4)
    assert matrix_rank(Z) == 0 and len(matrix_kernel(Z)) == 4
    M = RatMatrix(2, 2, [1, 2, 2, 4])
    assert matrix_rank(M) == 1
    (v,) = matrix_kernel(M)
    assert v[0] == -2 * v[1]


small_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3),
                           min_size=r * c, max_size=r * c).map(lambda e: RatMatrix(r, c, e))))


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_rank_nullity_and_kernel(M):
    ker = matrix_kernel(M)
    assert matrix_rank(M) + len(ker) == M.cols
    rows = M.to_rows()
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in rows)
    assert matrix_rank(M) == sympy.Matrix(rows).rank()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=1, max_size=6))
def test_modular_rank_bounds_exact(rows):
    assert modular_rank(rows) <= bareiss_rank([list(r) for r in rows])
    assert modular_rank(rows) == sympy.Matrix(rows).rank()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_det_against_sympy(e):
    M = RatMatrix(3, 3, e)
    assert rational_det(M) == sympy.Matrix(3, 3, e).det()


# -- univariate -------------------------------------------------------------------------

def test_gcd_examples():
    assert univariate_gcd(parse_poly("t1^2"), parse_poly("t1^3")) == parse_poly("t1^2")
    assert univariate_gcd(parse_poly("t1^2 - 1"), parse_poly("t1 - 1")) == parse_poly("t1 - 1")
    t = sympy.Symbol("t1")
    A = sympy.expand((t + 2) ** 3 * (t - 1))
    B = sympy.expand((t + 2) * (t - 1) ** 2)
    ctx = parse_poly("t1").ctx
    g = univariate_gcd(from_sympy(A, ctx), from_sympy(B, ctx))
    assert g == from_sympy((t + 2) * (t - 1), ctx)


def test_gcd_with_zero_is_monic():
    P = parse_poly("2*t1^2 + 4*t1")
    assert univariate_gcd(P, MultiPoly.zero(P.ctx)) == parse_poly("t1^2 + 2*t1")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.integers(1, 3),
       st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.integers(1, 3))
def test_squarefree_against_sympy(r1, m1, r2, m2):
    t = sympy.Symbol("t")
    f = sympy.Integer(1)
    for r in r1:
        f *= (t - r) ** m1
    for r in r2:
        f *= (t - r) ** m2
    poly = sympy.Poly(sympy.expand(f), t)
    dense = [Fraction(int(c)) for c in reversed(poly.all_coeffs())]
    c, parts = squarefree_decomposition(dense)
    rebuilt = sympy.Integer(c.numerator) / c.denominator
    for i, s in enumerate(parts, start=1):
        rebuilt *= sum(sympy.Rational(x.numerator, x.denominator) * t ** k for k, x in enumerate(s)) ** i
    assert sympy.expand(rebuilt - f) == 0
    assert [m for m, _ in sympy.sqf_list(f)[1]] and all(
        sympy.degree(sympy.gcd(p, sympy.diff(p, t)), t) == 0 for _, p in sympy.sqf_list(f)[1])
