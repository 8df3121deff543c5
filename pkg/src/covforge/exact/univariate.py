"""Univariate polynomial tools over Q (dense coefficient lists, low degree first)."""

from __future__ import annotations

from fractions import Fraction

from .poly import Context, MultiPoly, qnorm


def trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def divmod_dense(a: list, b: list) -> tuple:
    a = [Fraction(x) for x in trim(a)]
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = trim(a)
    return q, a


def monic(p: list) -> list:
    p = trim(p)
    if not p:
        return []
    lc = Fraction(p[-1])
    return [qnorm(Fraction(c) / lc) for c in p]


def gcd_dense(a: list, b: list) -> list:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_dense(a, b)
        a, b = b, r
    return monic(a)


def derivative(p: list) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def mul_dense(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pow_dense(a: list, k: int) -> list:
    out = [1]
    for _ in range(k):
        out = mul_dense(out, a)
    return out


def exact_div(a: list, b: list) -> list:
    q, r = divmod_dense(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return [qnorm(x) for x in trim(q)]


def squarefree_decomposition(p: list) -> tuple:
    """Yun's algorithm: p = c * prod_i s_i^i with monic squarefree, coprime s_i.

    Returns (c, [s_1, s_2, ...]) where s_i may be [1].
    """
    p = trim(p)
    if not p:
        raise ValueError("squarefree decomposition of zero")
    c = qnorm(Fraction(p[-1]))
    f = monic(p)
    if len(f) == 1:
        return c, []
    parts = []
    dp = derivative(f)
    a = gcd_dense(f, dp)
    b = exact_div(f, a)
    cc = exact_div(dp, a)
    d = [x - y for x, y in _pad(cc, derivative(b))]
    while len(trim(b)) > 1:
        s = gcd_dense(b, d)
        parts.append(s)
        b = exact_div(b, s)
        cc = exact_div(d, s)
        d = [x - y for x, y in _pad(cc, derivative(b))]
    return c, parts


def _pad(a: list, b: list):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


# -- MultiPoly wrappers --------------------------------------------------

def to_dense(P: MultiPoly) -> tuple:
    """(variable name or None, coefficient list) for a univariate MultiPoly."""
    used = P.variables()
    if len(used) > 1:
        raise ValueError(f"not univariate: {sorted(used)}")
    if not used:
        return None, trim([P.constant_value()])
    name = used.pop()
    i = P.ctx.index(name)
    deg = max(e[i] for e in P.terms)
    out = [0] * (deg + 1)
    for e, c in P.terms.items():
        out[e[i]] = c
    return name, out


def from_dense(coeffs: list, ctx: Context, name: str) -> MultiPoly:
    i = ctx.index(name)
    n = len(ctx)
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = k
            terms[tuple(e)] = c
    return MultiPoly(ctx, terms)


def univariate_gcd(P: MultiPoly, Q: MultiPoly) -> MultiPoly:
    """Monic gcd of two univariate polynomials in the same variable."""
    P, Q = P._coerce(Q)
    vp, a = to_dense(P)
    vq, b = to_dense(Q)
    if vp and vq and vp != vq:
        raise ValueError("polynomials in different variables")
    var = vp or vq
    g = gcd_dense(a, b)
    if var is None:
        return MultiPoly.const(P.ctx, 1 if g else 0)
    return from_dense(g, P.ctx, var)
