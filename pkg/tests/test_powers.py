import random
from fractions import Fraction
from math import gcd

import pytest
import sympy

from covforge.binary import BinaryForm
from covforge.covariants import evaluate_expression
from covforge.goettingen import hilbert_covariant
from covforge.powers import (alpha_kernel, alpha_matrix, perfect_power_decompose, power_exponent,
                             vanishing_test)


def mono(*c):
    return BinaryForm.from_monomial_coeffs(list(c))


def random_base(rng, e):
    c = [rng.randint(-4, 4) for _ in range(e + 1)]
    if rng.random() < 0.3:
        c[-1] = 0          # divisible by x1: exercises the line at infinity
    if rng.random() < 0.2:
        c[0] = 0
    if not any(c):
        c[0] = 1
    return BinaryForm.from_monomial_coeffs(c)


def sample_forms(rng, d, mu, count):
    """Half perfect mu-th powers, half near misses and random forms."""
    e = d // mu
    out = []
    for i in range(count):
        kind = i % 4
        if kind in (0, 1):
            out.append(random_base(rng, e) ** mu)
        elif kind == 2 and mu > 1:
            # product of a power with a distinct factor: never a mu-th power
            G = random_base(rng, e) ** (mu - 1)
            H = random_base(rng, e)
            out.append(G * H)
        else:
            out.append(BinaryForm.from_monomial_coeffs([rng.randint(-3, 3) for _ in range(d + 1)]))
    return out


def sympy_is_power(F: BinaryForm, mu: int) -> bool:
    """Independent oracle through sympy's factorisation over Q."""
    x1, x2 = sympy.symbols("x1 x2")
    expr = sympy.sympify(str(F.to_poly()).replace("^", "**"))
    if expr == 0:
        return True
    _, factors = sympy.factor_list(expr)
    return all(m % mu == 0 for _, m in factors)


def test_alpha_matrix_shape():
    F = mono(1, 0, 0, 0, 1)
    M = alpha_matrix(F, 2)
    assert (M.rows, M.cols) == (2 + 4 - 1, 3)


def test_alpha_self_kernel():
    rng = random.Random(0)
    for d in (2, 3, 4):
        F = BinaryForm.from_monomial_coeffs([rng.randint(-5, 5) for _ in range(d + 1)])
        ker = alpha_kernel(F, d)
        M = alpha_matrix(F, d)
        v = [c.constant_value() for c in F.monomial_coeffs()]
        rows = M.to_rows()
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in rows)
        assert ker


def test_alpha_kernel_examples():
    assert alpha_kernel(mono(1, 0, 0, 0, 1), 2) == []
    (k,) = alpha_kernel(mono(0, 0, 0, 1, 0, 0, 0), 2)   # (x1 x2)^3
    v = [c.constant_value() for c in k.monomial_coeffs()]
    assert v[0] == v[2] == 0 and v[1] != 0
    (k,) = alpha_kernel(mono(1, 0, 2, 0, 1), 2)          # (x1^2 + x2^2)^2
    v = [c.constant_value() for c in k.monomial_coeffs()]
    assert v[1] == 0 and v[0] == v[2] != 0


def test_alpha_of_power():
    rng = random.Random(1)
    for r, d in ((2, 4), (2, 6), (4, 6)):
        e, mu, mup = power_exponent(r, d)
        G = random_base(rng, e)
        F = G ** mu
        Gp = G ** mup
        M = alpha_matrix(F, r)
        v = [c.constant_value() for c in Gp.monomial_coeffs()]
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M.to_rows())


def test_generic_alpha_injective():
    rng = random.Random(2)
    for _ in range(50):
        d = rng.randint(3, 6)
        r = rng.randint(1, d - 1)
        F = BinaryForm.from_monomial_coeffs([rng.randint(-9, 9) for _ in range(d + 1)])
        if sympy_is_power(F, d // gcd(r, d)):
            continue
        assert alpha_kernel(F, r) == []


def test_decompose_examples():
    for d in range(1, 7):
        dec = perfect_power_decompose(mono(1, *([0] * d)), d)
        assert dec.base.monomial_coeffs()[0].constant_value() == 1 and dec.base.order == 1
    cube = mono(1, 0, 2) ** 3
    dec = perfect_power_decompose(cube, 3)
    assert dec.base.rational_coeffs() == [1, 0, 2] and dec.scalar == 1
    assert [c.constant_value() for c in dec.base.monomial_coeffs()] == [1, 0, 2]
    assert perfect_power_decompose(mono(0, 1, 0, 0, 0, 0, 0), 2) is None


def test_decompose_scalar_and_normalisation():
    F = (mono(2, -4, 6) ** 2).scale(Fraction(3, 5))
    dec = perfect_power_decompose(F, 2)
    base = [c.constant_value() for c in dec.base.monomial_coeffs()]
    assert base == [1, -2, 3]
    assert dec.expand() == F


def test_decompose_zero_and_errors():
    dec = perfect_power_decompose(mono(0, 0, 0, 0), 3)
    assert dec.scalar == 0
    with pytest.raises(ValueError):
        perfect_power_decompose(mono(1, 0, 0, 0), 2)


def test_decompose_against_sympy():
    rng = random.Random(3)
    for _ in range(60):
        mu = rng.choice([2, 3])
        e = rng.randint(1, 3)
        F = sample_forms(rng, e * mu, mu, 4)[rng.randrange(4)]
        dec = perfect_power_decompose(F, mu)
        assert (dec is not None) == sympy_is_power(F, mu)
        if dec is not None:
            assert dec.expand() == F


def test_vanishing_examples():
    rng = random.Random(4)
    H26 = hilbert_covariant(2, 6)
    assert vanishing_test(H26, random_base(rng, 2) ** 3)
    assert vanishing_test(hilbert_covariant(2, 5), mono(1, 1) ** 5)
    assert not vanishing_test(H26, mono(1, 0, 0, 0, 0, 0, 1))


@pytest.mark.parametrize("r,d", [(2, 4), (2, 6), (3, 6), (2, 5)])
def test_three_way_agreement(r, d):
    rng = random.Random(100 * r + d)
    e, mu, _ = power_exponent(r, d)
    H = hilbert_covariant(r, d)
    disagreements = 0
    for F in sample_forms(rng, d, mu, 100):
        a = bool(alpha_kernel(F, r))
        b = vanishing_test(H, F)
        c = perfect_power_decompose(F, mu) is not None
        disagreements += not (a == b == c)
    assert disagreements == 0


def test_hessian_vanishing_matches_power():
    rng = random.Random(5)
    He = evaluate_expression("T(F,F,2)", 4)
    for _ in range(20):
        F = sample_forms(rng, 4, 4, 4)[rng.randrange(4)]
        assert vanishing_test(He, F) == (perfect_power_decompose(F, 4) is not None)
