import itertools
from math import comb

import pytest
import sympy

from covforge.ideals import (InfeasibleError, ambient_dim, compare_pieces, g_piece, ideal_containment, ix_piece,
                             j_piece, monomial_basis, saturation_lemma_check, saturation_scan)


def test_monomial_basis_size():
    for d in range(1, 5):
        for m in range(4):
            assert len(monomial_basis(d, m)) == comb(d + m, m) == ambient_dim(d, m)


def test_j_piece_examples():
    assert j_piece(2, 5, 2).rank() == 0
    assert j_piece(1, 2, 2).rank() == 1


def test_j_piece_r2_d6_degree3():
    # J_3 is spanned by the 13 coefficients h_0..h_12 of Hilb_{2,6}; they are independent
    assert j_piece(2, 6, 3).rank() == 13
    assert ix_piece(2, 6, 3).rank() == 29


def test_ix_examples():
    assert ix_piece(3, 6, 4).rank() == 45
    for d in range(2, 7):
        assert ix_piece(1, d, 1).rank() == 0
    with pytest.raises(ValueError):
        ix_piece(4, 6, 2)


def test_ix_against_sympy_small():
    # independent oracle: kernel of the substitution map built with sympy
    e, d, m = 1, 3, 2
    q = sympy.symbols("q0:%d" % (e + 1))
    x1, x2 = sympy.symbols("x1 x2")
    G = sum(sympy.binomial(e, i) * q[i] * x1 ** (e - i) * x2 ** i for i in range(e + 1))
    P = sympy.Poly(sympy.expand(G ** (d // e)), x1, x2)
    coeffs = [P.coeff_monomial(x1 ** (d - i) * x2 ** i) / sympy.binomial(d, i) for i in range(d + 1)]
    monos = list(itertools.combinations_with_replacement(range(d + 1), m))
    images = [sympy.expand(sympy.Mul(*[coeffs[i] for i in mono])) for mono in monos]
    targets = sorted({t for im in images for t in sympy.Poly(im, *q).monoms()})
    M = sympy.Matrix([[sympy.Poly(im, *q).coeff_monomial(sympy.Mul(*[v ** k for v, k in zip(q, t)]))
                       for t in targets] for im in images])
    assert ix_piece(e, d, m).rank() == len(monos) - M.rank()


@pytest.mark.parametrize("d", [3, 4, 5])
def test_rational_normal_curve_quadrics(d):
    expect = sum(2 * d - 4 * n + 1 for n in range(1, d // 2 + 1))
    assert ix_piece(1, d, 2).rank() == expect


def test_ix_dimension_two_ways():
    for e, d, m in ((1, 4, 2), (2, 4, 3), (2, 6, 3), (3, 6, 3)):
        X = ix_piece(e, d, m)
        assert len(X.rows) == X.rank("exact") == X.rank("modular")


def test_twisted_cubic_minors():
    g = g_piece(1, 3, 2)
    assert g.rank() == 3
    assert compare_pieces(g, ix_piece(1, 3, 2)).relation == "equal"


def test_g_equals_ix_r3_d6():
    assert g_piece(3, 6, 4).rank() == 45
    assert compare_pieces(g_piece(3, 6, 4), ix_piece(3, 6, 4)).relation == "equal"


@pytest.mark.parametrize("r,d", [(2, 4), (2, 6)])
def test_chain_j_g_ix(r, d):
    for m in (r + 1, r + 2):
        J, g, X = j_piece(r, d, m), g_piece(r, d, m), ix_piece(r, d, m)
        assert compare_pieces(J, g).relation in ("equal", "A<B")
        assert compare_pieces(g, X).relation in ("equal", "A<B")


def test_compare_examples():
    A = j_piece(2, 4, 3)
    assert compare_pieces(A, j_piece(2, 4, 3)).relation == "equal"
    assert compare_pieces(j_piece(3, 6, 4), ix_piece(3, 6, 4)).relation == "A<B"
    with pytest.raises(ValueError):
        compare_pieces(j_piece(2, 4, 3), j_piece(2, 5, 3))


@pytest.mark.parametrize("r1,r2,d,expect", [
    (2, 3, 5, False), (3, 4, 5, False), (2, 4, 5, True),
    (4, 6, 5, False), (2, 6, 4, True), (6, 10, 4, True),
])
def test_containment_table(r1, r2, d, expect):
    assert ideal_containment(r1, r2, d) is expect


@pytest.mark.parametrize("r", [2, 3, 4])
@pytest.mark.parametrize("d", [5, 6])
def test_j1_contains_jr(r, d):
    assert ideal_containment(1, r, d)


@pytest.mark.parametrize("r,d", [(1, 4), (2, 6), (3, 6), (1, 3), (2, 5)])
def test_saturation_lemma(r, d):
    assert saturation_lemma_check(r, d)


def test_saturation_scan_24():
    rep = saturation_scan(2, 4, 5)
    assert rep.candidate_si == 3
    assert [(x.dim_J, x.dim_IX) for x in rep.rows] == [(7, 7), (25, 25), (60, 60)]
    assert rep.to_csv().splitlines()[0] == "m,dim_J,dim_IX,equal"


def test_saturation_scan_26():
    rep = saturation_scan(2, 6, 8)
    assert rep.candidate_si == 7
    assert not rep.rows[-3].equal and rep.rows[-2].equal and rep.rows[-1].equal


@pytest.mark.heavy
def test_saturation_scan_36():
    rep = saturation_scan(3, 6, 10)
    assert rep.candidate_si == 9
    assert [x.dim_J for x in rep.rows] == [17, 119, 419, 1026, 2033, 3675, 6237]
    assert [x.dim_IX for x in rep.rows] == [45, 176, 469, 1036, 2034, 3675, 6237]


def test_scan_needs_divisor_and_limit(monkeypatch):
    with pytest.raises(ValueError):
        saturation_scan(4, 6, 6)
    with pytest.raises(InfeasibleError):
        saturation_scan(2, 12, 8, limit=1000)
    monkeypatch.setenv("COVFORGE_MAX_DIM", "10")
    with pytest.raises(InfeasibleError):
        saturation_scan(2, 4, 5)
