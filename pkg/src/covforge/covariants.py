"""Covariants of the generic binary form and the operators acting on them.

The operators E+, E-, E0 act on polynomials in the coefficient family
``a0 .. ad``; the Gamma operators additionally act on ``x1, x2``.  A
covariant is annihilated by all three Gamma operators, and is recovered
from its source (leading coefficient) by iterating E+.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .binary import BinaryForm, binary_family, coefficient_context, proportionality, transvectant
from .exact import Context, MultiPoly, parse_poly, qnorm


class NotASource(ValueError):
    pass


class IdentityMismatch(ValueError):
    """The two sides of an identity have different degree or order."""


# -- Cayley operators -----------------------------------------------------

def _shift_derivation(P: MultiPoly, family: str, d: int, up: bool) -> MultiPoly:
    lo, _ = P.ctx.span(family)
    out: dict = {}
    get = out.get
    for e, c in P.terms.items():
        for i in range(d + 1):
            n = e[lo + i]
            if not n:
                continue
            if up:
                if i == d:
                    continue
                j, f = i + 1, (d - i) * n
            else:
                if i == 0:
                    continue
                j, f = i - 1, i * n
            v = list(e)
            v[lo + i] -= 1
            v[lo + j] += 1
            v = tuple(v)
            w = get(v)
            out[v] = c * f if w is None else w + c * f
    return MultiPoly(P.ctx, {e: qnorm(c) for e, c in out.items() if c}, clean=True)


def _e0(P: MultiPoly, family: str, d: int) -> MultiPoly:
    lo, _ = P.ctx.span(family)
    out = {}
    for e, c in P.terms.items():
        f = sum((2 * i - d) * e[lo + i] for i in range(d + 1))
        if f:
            out[e] = c * f
    return MultiPoly(P.ctx, out, clean=True)


def _x_part(P: MultiPoly, var: str, kind: str) -> MultiPoly:
    i1, i2 = P.ctx.index(f"{var}1"), P.ctx.index(f"{var}2")
    out = {}
    for e, c in P.terms.items():
        if kind == "+":  # x1 d/dx2
            if e[i2]:
                v = list(e)
                v[i2] -= 1
                v[i1] += 1
                out[tuple(v)] = c * e[i2]
        elif kind == "-":  # x2 d/dx1
            if e[i1]:
                v = list(e)
                v[i1] -= 1
                v[i2] += 1
                out[tuple(v)] = c * e[i1]
        else:  # x1 d/dx1 - x2 d/dx2
            f = e[i1] - e[i2]
            if f:
                out[e] = c * f
    return MultiPoly(P.ctx, out, clean=True)


_KINDS = {"E+", "E-", "E0", "G+", "G-", "G0"}
_ALIASES = {"Γ+": "G+", "Γ-": "G-", "Γ0": "G0", "E₊": "E+", "E₋": "E-", "E₀": "E0"}


def cayley_operator(kind: str, P: MultiPoly, d: int, family: str = "a", var: str = "x") -> MultiPoly:
    """Apply one of E+, E-, E0, G+, G-, G0 (G = Gamma) to ``P``."""
    kind = _ALIASES.get(kind, kind)
    if kind not in _KINDS:
        raise ValueError(f"unknown operator {kind!r}")
    if not P.ctx.has_family(family):
        raise ValueError(f"polynomial has no {family!r} variables")
    if len(P.ctx.family(family)) != d + 1:
        raise ValueError(f"family {family!r} does not have {d + 1} variables")
    sign = kind[1]
    if sign == "0":
        base = _e0(P, family, d)
    else:
        base = _shift_derivation(P, family, d, up=(sign == "+"))
    if kind[0] == "E":
        return base
    if not P.ctx.has_family(var):
        raise ValueError(f"Gamma operators need the {var!r} variables")
    xp = _x_part(P, var, sign)
    return base + xp if sign == "0" else base - xp


def e_plus(P: MultiPoly, d: int, family: str = "a") -> MultiPoly:
    return _shift_derivation(P, family, d, up=True)


def e_minus(P: MultiPoly, d: int, family: str = "a") -> MultiPoly:
    return _shift_derivation(P, family, d, up=False)


def e_zero(P: MultiPoly, d: int, family: str = "a") -> MultiPoly:
    return _e0(P, family, d)


def _iterate(op, P: MultiPoly, k: int, d: int, family: str) -> MultiPoly:
    for _ in range(k):
        P = op(P, d, family)
    return P


def lemma_e_check(P: MultiPoly, n: int, d: int, family: str = "a") -> bool:
    """E- E+^(n+1) P == E+^(n+1) E- P - (n+1) E+^n E0 P - n(n+1) E+^n P."""
    lhs = e_minus(_iterate(e_plus, P, n + 1, d, family), d, family)
    rhs = (_iterate(e_plus, e_minus(P, d, family), n + 1, d, family)
           - _iterate(e_plus, e_zero(P, d, family), n, d, family).scale(n + 1)
           - _iterate(e_plus, P, n, d, family).scale(n * (n + 1)))
    return lhs == rhs


# -- the Covariant type -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Covariant:
    """Degree-``degree``, order-``order`` covariant of the generic ``d``-ic."""

    d: int
    degree: int
    order: int
    coeffs: tuple
    family: str = "a"
    var: str = "x"

    def __post_init__(self):
        ctx = coefficient_context(self.family, self.d)
        cs = []
        for c in self.coeffs:
            if not isinstance(c, MultiPoly):
                c = MultiPoly.const(ctx, c)
            cs.append(c.restrict(ctx) if c.ctx != ctx and ctx.issubcontext(c.ctx) else c.extend(ctx))
        object.__setattr__(self, "coeffs", tuple(cs))
        if len(cs) != self.order + 1:
            raise ValueError("coefficient count must be order + 1")
        twice_w = self.d * self.degree - self.order
        if twice_w < 0 or twice_w % 2:
            raise ValueError(f"d*m - q = {twice_w} must be even and nonnegative")
        w = twice_w // 2
        for k, c in enumerate(cs):
            if not c.is_homogeneous(self.family, self.degree):
                raise ValueError(f"coefficient {k} is not homogeneous of degree {self.degree}")
            if not c.is_isobaric(self.family, w + k):
                raise ValueError(f"coefficient {k} is not isobaric of weight {w + k}")

    @property
    def weight(self) -> int:
        return (self.d * self.degree - self.order) // 2

    @property
    def source(self) -> MultiPoly:
        return self.coeffs[0]

    @property
    def ctx(self) -> Context:
        return coefficient_context(self.family, self.d)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def to_form(self) -> BinaryForm:
        return BinaryForm(self.order, self.coeffs, self.var, self.ctx)

    def to_poly(self) -> MultiPoly:
        """The bihomogeneous polynomial sum_k C(q, k) phi_k x1^(q-k) x2^k."""
        return self.to_form().to_poly()

    @classmethod
    def from_form(cls, form: BinaryForm, d: int, degree: int | None = None,
                  family: str = "a") -> "Covariant":
        ctx = coefficient_context(family, d)
        coeffs = [c.extend(ctx) if c.ctx != ctx else c for c in form.coeffs]
        if degree is None:
            degs = set()
            for c in coeffs:
                degs |= c.degrees_in(family)
            if len(degs) != 1:
                raise ValueError("cannot infer the degree of a zero or inhomogeneous form")
            degree = degs.pop()
        return cls(d, degree, form.order, tuple(coeffs), family, form.var)

    def scale(self, c) -> "Covariant":
        return Covariant(self.d, self.degree, self.order,
                         tuple(x.scale(c) for x in self.coeffs), self.family, self.var)

    def __eq__(self, other):
        if not isinstance(other, Covariant):
            return NotImplemented
        return ((self.d, self.degree, self.order) == (other.d, other.degree, other.order)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.d, self.degree, self.order, self.coeffs))

    def __repr__(self):
        return f"Covariant(d={self.d}, degree={self.degree}, order={self.order})"

    def to_json(self) -> dict:
        return {"d": self.d, "degree": self.degree, "order": self.order,
                "coefficients": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data, family: str = "a") -> "Covariant":
        if isinstance(data, str):
            data = json.loads(data)
        d = int(data["d"])
        ctx = coefficient_context(family, d)
        coeffs = tuple(parse_poly(t, ctx) for t in data["coefficients"])
        return cls(d, int(data["degree"]), int(data["order"]), coeffs, family)


def zero_covariant(d: int, degree: int, order: int, family: str = "a") -> Covariant:
    ctx = coefficient_context(family, d)
    return Covariant(d, degree, order, tuple(MultiPoly.zero(ctx) for _ in range(order + 1)), family)


def generic_covariant(d: int, family: str = "a") -> Covariant:
    return Covariant.from_form(BinaryForm.generic(d, family), d, 1, family)


def covariant_from_source(phi0: MultiPoly, d: int, family: str = "a") -> Covariant:
    """Rebuild a covariant from its source: phi_k = (q-k)!/q! E+^k(phi0)."""
    ctx = coefficient_context(family, d)
    phi0 = phi0.extend(ctx) if phi0.ctx != ctx else phi0
    if phi0.is_zero():
        raise NotASource("the zero polynomial determines no covariant")
    degs = phi0.degrees_in(family)
    ws = phi0.weights_in(family)
    if len(degs) != 1 or len(ws) != 1:
        raise NotASource("source must be homogeneous and isobaric")
    m, w = degs.pop(), ws.pop()
    if e_minus(phi0, d, family):
        raise NotASource("E- does not annihilate the candidate source")
    q = d * m - 2 * w
    if q < 0:
        raise NotASource(f"negative order {q}")
    coeffs = [phi0]
    cur = phi0
    for k in range(1, q + 1):
        cur = e_plus(cur, d, family)
        coeffs.append(cur.scale(Fraction(factorial(q - k), factorial(q))))
    if e_plus(cur, d, family):
        raise AssertionError("E+^(q+1) of a source must vanish")
    return Covariant(d, m, q, tuple(coeffs), family)


@dataclass
class Verification:
    ok: bool
    failed: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    @property
    def first_failure(self):
        return self.failed[0] if self.failed else None


# E- first: it is the source condition; then weight, then the raising operator
_CHECK_ORDER = ("G-", "G0", "G+")


def verify_covariant(phi: Covariant) -> Verification:
    """Check Gamma_-, Gamma_0, Gamma_+ all annihilate the bihomogeneous form."""
    P = phi.to_poly()
    failed = [k for k in _CHECK_ORDER
              if cayley_operator(k, P, phi.d, phi.family, phi.var)]
    return Verification(not failed, failed)


# -- Cayley-Sylvester counts ---------------------------------------------------

@lru_cache(maxsize=None)
def partition_count(n: int, k: int, l: int) -> int:
    """Partitions of n into at most k parts, none exceeding l."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    if k <= 0 or l <= 0:
        return 0
    return partition_count(n, k, l - 1) + partition_count(n - l, k - 1, l)


def zeta(d: int, m: int, q: int) -> int:
    """Dimension of the space of degree-m, order-q covariants of binary d-ics."""
    t = d * m - q
    if t < 0 or t % 2:
        return 0
    return partition_count(t // 2, d, m) - partition_count((t - 2) // 2, d, m)


# -- compound transvectant expressions -------------------------------------------

_EXPR_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<word>[A-Za-z]+)|(?P<op>[-+*^(),]))")


def _expr_tokens(text: str) -> list:
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _EXPR_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse expression near {text[pos:pos + 12]!r}")
        toks.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    return toks


@dataclass
class _Val:
    """A scalar or a form together with its degree in the coefficients."""

    form: BinaryForm | None
    degree: int
    scalar: Fraction | None = None


class ExpressionEvaluator:
    """Recursive-descent evaluator for compound transvectant expressions.

    Grammar::

        expr   := term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := atom ('^' int)?
        atom   := rational | F | B | '(' expr ')'
                | T '(' expr ',' expr ',' int ')'
                | MUL '(' expr (',' expr)* ')' | POW '(' expr ',' int ')'
                | HILB '(' int ')' | GOTT '(' int ')'

    ``F`` and ``B`` both denote the generic form of the evaluation context.
    """

    def __init__(self, d: int, family: str = "a"):
        self.d = d
        self.family = family
        self.F = BinaryForm.generic(d, family)

    def evaluate(self, text: str) -> Covariant:
        self.toks = _expr_tokens(text)
        self.i = 0
        v = self._expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input in expression: {self.toks[self.i:]}")
        if v.form is None:
            raise ValueError("expression is a bare scalar")
        return Covariant.from_form(v.form, self.d, v.degree, self.family)

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def _eat(self, val=None):
        tok = self._peek()
        if val is not None and tok[1] != val:
            raise ValueError(f"expected {val!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def _int(self) -> int:
        kind, val = self._eat()
        if kind != "num" or "/" in val:
            raise ValueError(f"expected integer, got {val!r}")
        return int(val)

    def _add(self, a: _Val, b: _Val, sign: int) -> _Val:
        if a.form is None or b.form is None:
            if a.form is None and b.form is None:
                return _Val(None, 0, a.scalar + sign * b.scalar)
            raise IdentityMismatch("cannot add a scalar to a covariant")
        if a.form.order != b.form.order or a.degree != b.degree:
            raise IdentityMismatch(
                f"adding (degree {a.degree}, order {a.form.order}) "
                f"to (degree {b.degree}, order {b.form.order})")
        return _Val(a.form + b.form.scale(sign), a.degree)

    def _mul(self, a: _Val, b: _Val) -> _Val:
        if a.form is None and b.form is None:
            return _Val(None, 0, a.scalar * b.scalar)
        if a.form is None:
            return _Val(b.form.scale(a.scalar), b.degree)
        if b.form is None:
            return _Val(a.form.scale(b.scalar), a.degree)
        return _Val(a.form * b.form, a.degree + b.degree)

    def _pow(self, a: _Val, k: int) -> _Val:
        if a.form is None:
            return _Val(None, 0, a.scalar ** k)
        return _Val(a.form ** k, a.degree * k)

    def _expr(self) -> _Val:
        sign = 1
        if self._peek()[1] in ("+", "-"):
            sign = -1 if self._eat()[1] == "-" else 1
        v = self._term()
        if sign < 0:
            v = self._mul(_Val(None, 0, Fraction(-1)), v)
        while self._peek()[1] in ("+", "-"):
            s = 1 if self._eat()[1] == "+" else -1
            v = self._add(v, self._term(), s)
        return v

    def _term(self) -> _Val:
        v = self._factor()
        while self._peek()[1] == "*":
            self._eat()
            v = self._mul(v, self._factor())
        return v

    def _factor(self) -> _Val:
        v = self._atom()
        if self._peek()[1] == "^":
            self._eat()
            v = self._pow(v, self._int())
        return v

    def _atom(self) -> _Val:
        kind, val = self._eat()
        if kind == "num":
            return _Val(None, 0, Fraction(val))
        if val == "(":
            v = self._expr()
            self._eat(")")
            return v
        if val in ("F", "B"):
            return _Val(self.F, 1)
        if val == "T":
            self._eat("(")
            a = self._expr()
            self._eat(",")
            b = self._expr()
            self._eat(",")
            k = self._int()
            self._eat(")")
            if a.form is None or b.form is None:
                raise ValueError("transvectant of a scalar")
            return _Val(transvectant(a.form, b.form, k), a.degree + b.degree)
        if val == "MUL":
            self._eat("(")
            v = self._expr()
            while self._peek()[1] == ",":
                self._eat()
                v = self._mul(v, self._expr())
            self._eat(")")
            return v
        if val == "POW":
            self._eat("(")
            v = self._expr()
            self._eat(",")
            k = self._int()
            self._eat(")")
            return self._pow(v, k)
        if val in ("HILB", "GOTT"):
            from . import goettingen

            self._eat("(")
            r = self._int()
            self._eat(")")
            if self.family != "a":
                raise ValueError(f"{val} is only available over the a-coefficients")
            cov = (goettingen.hilbert_covariant(r, self.d) if val == "HILB"
                   else goettingen.goettingen_basic(r, self.d))
            return _Val(cov.to_form(), cov.degree)
        raise ValueError(f"unexpected token {val!r}")


def evaluate_expression(text: str, d: int, family: str = "a") -> Covariant:
    return ExpressionEvaluator(d, family).evaluate(text)


def _sides(lhs: str, rhs: str, d: int) -> tuple:
    a = evaluate_expression(lhs, d)
    b = evaluate_expression(rhs, d)
    if (a.degree, a.order) != (b.degree, b.order):
        raise IdentityMismatch(
            f"lhs has degree/order {(a.degree, a.order)}, rhs {(b.degree, b.order)}")
    return a, b


def identity_check(lhs: str, rhs: str, d: int) -> bool:
    """Exact coefficientwise comparison of two compound expressions."""
    a, b = _sides(lhs, rhs, d)
    return a == b


def proportionality_scalar(lhs: str, rhs: str, d: int):
    """c with lhs = c * rhs, or None if the sides are not proportional."""
    a, b = _sides(lhs, rhs, d)
    return proportionality(a.to_form(), b.to_form())


def covariant_proportionality(A: Covariant, B: Covariant):
    if (A.d, A.degree, A.order) != (B.d, B.degree, B.order):
        return None
    return proportionality(A.to_form(), B.to_form())
