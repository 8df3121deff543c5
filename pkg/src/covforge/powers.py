"""The map alpha_F : A -> (A, F)_1 and exact perfect-power decisions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .binary import BinaryForm, transvectant
from .covariants import Covariant
from .exact import RatMatrix, format_scalar, matrix_kernel, qnorm
from .exact.matrix import primitive
from .exact.univariate import squarefree_decomposition, mul_dense, pow_dense, trim


def _monomial_form(r: int, j: int, var: str) -> BinaryForm:
    mono = [0] * (r + 1)
    mono[j] = 1
    return BinaryForm.from_monomial_coeffs(mono, var)


def alpha_columns_monomial(F: BinaryForm, r: int) -> list:
    """Monomial coefficient vectors of (x1^(r-j) x2^j, F)_1, j = 0..r."""
    if F.order < 2:
        raise ValueError("alpha_F needs d >= 2")
    return [transvectant(_monomial_form(r, j, F.var), F, 1).monomial_coeffs() for j in range(r + 1)]


def alpha_matrix(F: BinaryForm, r: int) -> RatMatrix:
    """(r+d-1) x (r+1) matrix of alpha_F in monomial bases."""
    cols = alpha_columns_monomial(F, r)
    n = len(cols[0])
    entries = [cols[j][i].constant_value() for i in range(n) for j in range(r + 1)]
    return RatMatrix(n, r + 1, entries)


def alpha_matrix_generic(F: BinaryForm, r: int) -> list:
    """The same matrix with polynomial entries, as a list of rows."""
    cols = alpha_columns_monomial(F, r)
    return [[cols[j][i] for j in range(r + 1)] for i in range(len(cols[0]))]


def alpha_kernel(F: BinaryForm, r: int) -> list:
    """Kernel of alpha_F as order-r forms."""
    return [BinaryForm.from_monomial_coeffs(v, F.var) for v in matrix_kernel(alpha_matrix(F, r))]


@dataclass(frozen=True)
class PowerDecomposition:
    base: BinaryForm
    exponent: int
    scalar: Fraction

    def expand(self) -> BinaryForm:
        return (self.base ** self.exponent).scale(self.scalar)

    def to_json(self) -> dict:
        return {"is_power": True, "mu": self.exponent, "base": self.base.to_json(),
                "scalar": format_scalar(self.scalar)}


def not_a_power_json(mu: int) -> dict:
    return {"is_power": False, "mu": mu, "base": None, "scalar": None}


def perfect_power_decompose(F: BinaryForm, mu: int) -> PowerDecomposition | None:
    """Write F = scalar * G^mu with G rational and primitive, or return None.

    The power of x1 dividing F is read from the trailing zero monomial
    coefficients; the rest is handled through Yun's squarefree
    decomposition of F(1, t).
    """
    d = F.order
    if mu < 1 or d % mu:
        raise ValueError(f"mu = {mu} must be a positive divisor of d = {d}")
    e = d // mu
    m = [qnorm(Fraction(c)) for c in (x.constant_value() for x in F.monomial_coeffs())]
    if not any(m):
        base = BinaryForm.from_monomial_coeffs([1] + [0] * e, F.var)
        return PowerDecomposition(base, mu, Fraction(0))
    # multiplicity of x1: monomial coefficient j multiplies x1^(d-j) x2^j
    top = max(j for j, c in enumerate(m) if c)
    f_x1 = d - top
    if f_x1 % mu:
        return None
    dense = trim(m[:top + 1])  # f(t) = sum m_j t^j
    c, parts = squarefree_decomposition(dense)
    g = [Fraction(1)]
    for i, s in enumerate(parts, start=1):
        if len(trim(s)) <= 1:
            continue
        if i % mu:
            return None
        g = mul_dense(g, pow_dense(s, i // mu))
    # homogenise: G = x1^(f_x1/mu) * x1^(deg chunk) g(x2/x1), total order e
    gm = [Fraction(0)] * (e + 1)
    for j, v in enumerate(g):
        gm[j] = Fraction(v)
    ints = primitive(gm)
    lead = next(x for x in gm if x)
    s = Fraction(next(x for x in ints if x)) / lead  # ints = s * gm
    scalar = qnorm(Fraction(c) / s ** mu)
    base = BinaryForm.from_monomial_coeffs(ints, F.var)
    out = PowerDecomposition(base, mu, scalar)
    assert out.expand().rational_coeffs() == F.rational_coeffs()
    return out


def power_exponent(r: int, d: int) -> tuple:
    """(e, mu, mu') with e = gcd(r, d), d = e mu, r = e mu'."""
    e = gcd(r, d)
    return e, d // e, r // e


def vanishing_test(phi: Covariant, F: BinaryForm) -> bool:
    from .goettingen import evaluate_covariant

    return evaluate_covariant(phi, F).is_zero()
