"""Binary forms in Cayley's binomial convention.

A form of order ``d`` with coefficients ``c_0 .. c_d`` stands for
``sum_i C(d, i) c_i x1^(d-i) x2^i``.  Coefficients are polynomials (possibly
constant) over a shared coefficient context; the two form variables are
``<var>1`` and ``<var>2``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .exact import EMPTY, Context, MultiPoly, VarFamily, det, parse_poly, poly_sum, qnorm
from .exact.poly import infer_context, split_var_name


def binary_family(var: str = "x") -> VarFamily:
    return VarFamily(var, (1, 2))


def coefficient_context(family: str, d: int) -> Context:
    return Context([VarFamily.flat(family, d + 1)])


class BinaryForm:
    __slots__ = ("order", "coeffs", "var", "cctx")

    def __init__(self, order: int, coeffs: Sequence, var: str = "x", cctx: Context | None = None):
        if order < 0:
            raise ValueError("order must be nonnegative")
        if len(coeffs) != order + 1:
            raise ValueError(f"order {order} form needs {order + 1} coefficients, got {len(coeffs)}")
        if cctx is None:
            cctx = EMPTY
            for c in coeffs:
                if isinstance(c, MultiPoly):
                    cctx = cctx.union(c.ctx)
        if cctx.has_family(var):
            raise ValueError(f"form variable family {var!r} clashes with coefficient variables")
        cs = []
        for c in coeffs:
            if isinstance(c, MultiPoly):
                cs.append(c.extend(cctx))
            else:
                cs.append(MultiPoly.const(cctx, c))
        self.order = order
        self.coeffs = tuple(cs)
        self.var = var
        self.cctx = cctx

    # -- constructors -------------------------------------------------
    @classmethod
    def generic(cls, d: int, family: str = "a", var: str = "x") -> "BinaryForm":
        ctx = coefficient_context(family, d)
        return cls(d, [MultiPoly.var(ctx, f"{family}{i}") for i in range(d + 1)], var, ctx)

    @classmethod
    def zero(cls, d: int, var: str = "x", cctx: Context = EMPTY) -> "BinaryForm":
        return cls(d, [MultiPoly.zero(cctx)] * (d + 1), var, cctx)

    @classmethod
    def from_monomial_coeffs(cls, coeffs: Sequence, var: str = "x") -> "BinaryForm":
        """From plain coefficients f_i of x1^(d-i) x2^i."""
        d = len(coeffs) - 1
        out = []
        for i, c in enumerate(coeffs):
            if isinstance(c, MultiPoly):
                out.append(c.scale(Fraction(1, comb(d, i))))
            else:
                out.append(qnorm(Fraction(c) / comb(d, i)))
        return cls(d, out, var)

    @classmethod
    def from_poly(cls, P: MultiPoly, var: str = "x", order: int | None = None) -> "BinaryForm":
        x1, x2 = f"{var}1", f"{var}2"
        i1, i2 = P.ctx.index(x1), P.ctx.index(x2)
        cctx = P.ctx.without(var)
        degs = {e[i1] + e[i2] for e in P.terms}
        if order is None:
            if len(degs) != 1:
                raise ValueError("polynomial is not homogeneous in the form variables")
            order = degs.pop()
        elif degs and degs != {order}:
            raise ValueError(f"polynomial is not a form of order {order}")
        parts = P.coefficients_in(var)
        coeffs = []
        for i in range(order + 1):
            c = parts.get((order - i, i))
            if c is None:
                coeffs.append(MultiPoly.zero(cctx))
            else:
                coeffs.append(c.scale(Fraction(1, comb(order, i))))
        return cls(order, coeffs, var, cctx)

    # -- conversion ---------------------------------------------------
    def poly_context(self) -> Context:
        return self.cctx.union(Context([binary_family(self.var)]))

    def to_poly(self, ctx: Context | None = None) -> MultiPoly:
        ctx = ctx or self.poly_context()
        xctx = Context([binary_family(self.var)])
        d = self.order
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = MultiPoly(xctx, {(d - i, i): comb(d, i)}, clean=True)
                parts.append((c * mono.extend(c.ctx.union(xctx))).extend(ctx))
        return poly_sum(parts, ctx)

    def monomial_coeffs(self) -> list:
        d = self.order
        return [c.scale(comb(d, i)) for i, c in enumerate(self.coeffs)]

    def rational_coeffs(self) -> list:
        """Cayley coefficients as scalars; fails if any is non-constant."""
        return [c.constant_value() for c in self.coeffs]

    def is_rational(self) -> bool:
        return all(c.is_constant() for c in self.coeffs)

    def with_context(self, cctx: Context) -> "BinaryForm":
        return BinaryForm(self.order, [c.extend(cctx) for c in self.coeffs], self.var, cctx)

    def rename_var(self, var: str) -> "BinaryForm":
        return BinaryForm(self.order, self.coeffs, var, self.cctx)

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coeffs)
        return f"({body} | {self.var}1,{self.var}2)^{self.order}"

    # -- ring operations ----------------------------------------------
    def _align(self, other: "BinaryForm"):
        if self.var != other.var:
            raise ValueError("forms in different variables")
        if self.cctx == other.cctx:
            return self, other
        ctx = self.cctx.union(other.cctx)
        return self.with_context(ctx), other.with_context(ctx)

    def __add__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if self.order != other.order:
            raise ValueError(f"cannot add forms of orders {self.order} and {other.order}")
        a, b = self._align(other)
        return BinaryForm(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)], a.var, a.cctx)

    def __neg__(self):
        return BinaryForm(self.order, [-c for c in self.coeffs], self.var, self.cctx)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BinaryForm":
        if isinstance(c, MultiPoly):
            ctx = self.cctx.union(c.ctx)
            return BinaryForm(self.order, [c * x.extend(ctx) for x in self.coeffs], self.var, ctx)
        return BinaryForm(self.order, [x.scale(c) for x in self.coeffs], self.var, self.cctx)

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            if isinstance(other, (int, Fraction, MultiPoly)):
                return self.scale(other)
            return NotImplemented
        a, b = self._align(other)
        m, n = a.order, b.order
        ctx = a.cctx
        out = []
        for l in range(m + n + 1):
            parts = []
            for s in range(max(0, l - n), min(m, l) + 1):
                t = l - s
                x, y = a.coeffs[s], b.coeffs[t]
                if x and y:
                    parts.append((x * y).scale(comb(m, s) * comb(n, t)))
            out.append(poly_sum(parts, ctx).scale(Fraction(1, comb(m + n, l))))
        return BinaryForm(m + n, out, a.var, ctx)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = BinaryForm(0, [MultiPoly.const(self.cctx, 1)], self.var, self.cctx)
        for _ in range(k):
            result = result * self
        return result

    def partial(self, n1: int, n2: int) -> "BinaryForm":
        """d^(n1+n2) / dx1^n1 dx2^n2, using the index shift of the Cayley form."""
        d = self.order
        k = n1 + n2
        if k > d:
            return BinaryForm.zero(0, self.var, self.cctx)
        f = factorial(d) // factorial(d - k)
        return BinaryForm(d - k, [c.scale(f) for c in self.coeffs[n2:n2 + d - k + 1]], self.var, self.cctx)

    def substitute_coeffs(self, values: dict) -> "BinaryForm":
        return BinaryForm(self.order, [c.subs(values) for c in self.coeffs], self.var)

    # -- json ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "order": self.order,
            "vars": [f"{self.var}1", f"{self.var}2"],
            "cayley_coefficients": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data) -> "BinaryForm":
        if isinstance(data, str):
            data = json.loads(data)
        texts = [str(c) for c in data["cayley_coefficients"]]
        d = int(data.get("order", len(texts) - 1))
        names = data.get("vars", ["x1", "x2"])
        base0, i0 = split_var_name(names[0])
        base1, i1 = split_var_name(names[1])
        if base0 != base1 or (i0, i1) != (1, 2):
            raise ValueError(f"form variables must look like v1, v2: {names}")
        if len(texts) != d + 1:
            raise ValueError("coefficient count does not match order")
        used = set()
        for t in texts:
            used |= parse_poly(t).variables()
        ctx = infer_context(used) if used else EMPTY
        return cls(d, [parse_poly(t, ctx) for t in texts], base0, ctx)


# -- transvectants and friends --------------------------------------------

def transvectant(A: BinaryForm, B: BinaryForm, k: int) -> BinaryForm:
    """(A, B)_k including the factorial prefactor.

    With the Cayley convention the prefactor cancels against the falling
    factorials of the k-th partial derivatives, leaving
    sum_i (-1)^i C(k, i) (a_i .. a_{i+p-k}) (b_{k-i} .. b_{q-i}).
    """
    if k < 0:
        raise ValueError("transvection index must be nonnegative")
    A, B = A._align(B)
    p, q = A.order, B.order
    if k > min(p, q):
        return BinaryForm.zero(max(p + q - 2 * k, 0), A.var, A.cctx)
    total = None
    for i in range(k + 1):
        a = BinaryForm(p - k, A.coeffs[i:i + p - k + 1], A.var, A.cctx)
        b = BinaryForm(q - k, B.coeffs[k - i:k - i + q - k + 1], B.var, B.cctx)
        term = (a * b).scale((-1) ** i * comb(k, i))
        total = term if total is None else total + term
    return total


def omega_apply(P: MultiPoly, k: int = 1, x: str = "x", y: str = "y") -> MultiPoly:
    """Apply (d^2/dx1 dy2 - d^2/dx2 dy1)^k."""
    ctx = P.ctx
    if not (ctx.has_family(x) and ctx.has_family(y)):
        raise ValueError(f"polynomial lacks family {x!r} or {y!r}")
    return omega_apply_named(P, k, (f"{x}1", f"{x}2"), (f"{y}1", f"{y}2"))


def omega_apply_named(P: MultiPoly, k: int, xs: tuple, ys: tuple) -> MultiPoly:
    """Omega^k for explicitly named variable pairs (x1, x2) and (y1, y2)."""
    ctx = P.ctx
    ix1, ix2 = ctx.index(xs[0]), ctx.index(xs[1])
    iy1, iy2 = ctx.index(ys[0]), ctx.index(ys[1])
    terms = P.terms
    for _ in range(k):
        out: dict = {}
        for e, c in terms.items():
            if e[ix1] and e[iy2]:
                v = list(e)
                v[ix1] -= 1
                v[iy2] -= 1
                v = tuple(v)
                out[v] = out.get(v, 0) + c * e[ix1] * e[iy2]
            if e[ix2] and e[iy1]:
                v = list(e)
                v[ix2] -= 1
                v[iy1] -= 1
                v = tuple(v)
                out[v] = out.get(v, 0) - c * e[ix2] * e[iy1]
        terms = {e: qnorm(c) for e, c in out.items() if c}
    return MultiPoly(ctx, terms, clean=True)


def transvectant_via_omega(A: BinaryForm, B: BinaryForm, k: int) -> BinaryForm:
    """Independent route: prefactor * {Omega^k [A(x) B(y)]}_{y := x}."""
    A, B = A._align(B)
    p, q = A.order, B.order
    if k > min(p, q):
        return BinaryForm.zero(max(p + q - 2 * k, 0), A.var, A.cctx)
    x = A.var
    y = "y" if x != "y" else "w"
    ctx = A.cctx.union(Context([binary_family(x), binary_family(y)]))
    PA = A.to_poly(ctx)
    PB = B.rename_var(y).to_poly(ctx)
    Q = omega_apply(PA * PB, k, x, y)
    Q = Q.subs({f"{y}1": MultiPoly.var(ctx, f"{x}1"), f"{y}2": MultiPoly.var(ctx, f"{x}2")})
    pref = Fraction(factorial(p - k) * factorial(q - k), factorial(p) * factorial(q))
    Q = Q.scale(pref).restrict(A.poly_context())
    return BinaryForm.from_poly(Q, x, p + q - 2 * k)


def hessian(F: BinaryForm) -> BinaryForm:
    """F_11 F_22 - F_12^2, of order 2d - 4."""
    if F.order < 2:
        raise ValueError("Hessian needs order >= 2")
    return F.partial(2, 0) * F.partial(0, 2) - F.partial(1, 1) * F.partial(1, 1)


def wronskian(forms: Sequence[BinaryForm]) -> BinaryForm:
    """det[ d^(m-1) A_i / dx1^(m-j) dx2^(j-1) ] for forms of a common order n."""
    m = len(forms)
    if m == 0:
        raise ValueError("empty Wronskian")
    n = forms[0].order
    if any(f.order != n for f in forms):
        raise ValueError("Wronskian needs forms of equal order")
    if m > n + 1:
        raise ValueError("more forms than the dimension of the space")
    var = forms[0].var
    cctx = EMPTY.union(*[f.cctx for f in forms])
    forms = [f.with_context(cctx) for f in forms]
    ctx = cctx.union(Context([binary_family(var)]))
    mat = [[f.partial(m - j, j - 1).to_poly(ctx) for j in range(1, m + 1)] for f in forms]
    D = det(mat, MultiPoly.zero(ctx), MultiPoly.const(ctx, 1))
    return BinaryForm.from_poly(D, var, m * (n - m + 1))


def check_sl2(g) -> tuple:
    (al, ga), (be, de) = [[Fraction(x) for x in row] for row in g]
    if al * de - be * ga != 1:
        raise ValueError("transformation must have determinant 1")
    return al, be, ga, de


def sl2_transform(F: BinaryForm, g) -> BinaryForm:
    """F^g = F(alpha x1 + beta x2, gamma x1 + delta x2) for g = [[alpha, gamma], [beta, delta]]."""
    al, be, ga, de = check_sl2(g)
    ctx = F.poly_context()
    x1 = MultiPoly.var(ctx, f"{F.var}1")
    x2 = MultiPoly.var(ctx, f"{F.var}2")
    P = F.to_poly(ctx).subs({f"{F.var}1": x1.scale(al) + x2.scale(be),
                             f"{F.var}2": x1.scale(ga) + x2.scale(de)})
    return BinaryForm.from_poly(P, F.var, F.order)


def proportionality(A, B):
    """Rational c with A = c * B, or None.  Works on forms and polynomials.

    Two zero objects give c = 0; exactly one zero gives None.
    """
    if isinstance(A, BinaryForm):
        if A.order != B.order:
            return None
        pa = [t for c in A.coeffs for t in [c]]
        pb = [t for c in B.coeffs for t in [c]]
    else:
        pa, pb = [A], [B]
    a_zero = all(p.is_zero() for p in pa)
    b_zero = all(p.is_zero() for p in pb)
    if a_zero and b_zero:
        return Fraction(0)
    if a_zero or b_zero:
        return None
    ratio = None
    for x, y in zip(pa, pb):
        x, y = x._coerce(y)
        if set(x.terms) != set(y.terms):
            return None
        for e, c in x.terms.items():
            r = Fraction(c) / y.terms[e]
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
    return qnorm(ratio)
