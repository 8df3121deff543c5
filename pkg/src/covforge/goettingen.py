"""Hilbert's covariant and the Goettingen covariants of the generic binary d-ic.

Hilbert's source is computed from the truncated binomial series of
``f(t)^(r/d)`` with ``f(t) = F(1, t)``; fractional powers of ``a0`` are never
formed, only the integer power of ``a0`` dividing each series coefficient is
tracked.  The Goettingen covariants come from Wronskian determinants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .binary import BinaryForm, binary_family, coefficient_context, proportionality, transvectant, wronskian
from .covariants import Covariant, covariant_from_source, e_plus, zero_covariant
from .exact import Context, MonomialImages, MultiPoly, VarFamily, add_scaled, det, poly_sum, qnorm

# explicit symmetrisation over (r+1)! permutations; larger r must be forced
MAX_SYMMETRIZATION_R = 6


def gen_binomial(rho: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= (rho - i)
    return out / factorial(j)


@dataclass(frozen=True)
class FracPowerSeries:
    """Truncation of ``f(t)^rho = a0^rho * sum_k (N_k / a0^k) t^k``.

    Only the numerators ``N_k`` are stored; each is a homogeneous polynomial
    of degree k in the a-family, so ``a0^k`` clears the k-th denominator.
    """

    d: int
    rho: Fraction
    numerators: tuple
    family: str = "a"

    @property
    def order(self) -> int:
        return len(self.numerators) - 1

    @classmethod
    def binomial_power(cls, d: int, rho, T: int, family: str = "a") -> "FracPowerSeries":
        """(1 + u)^rho with u = (f(t) - a0)/a0, expanded up to t^T."""
        rho = Fraction(rho)
        ctx = coefficient_context(family, d)
        a = [MultiPoly.var(ctx, f"{family}{i}") for i in range(d + 1)]
        zero = MultiPoly.zero(ctx)
        # U = sum_{i>=1} C(d,i) a_i t^i, as a list indexed by the power of t
        U = [zero] + [a[i].scale(comb(d, i)) if i <= d else zero for i in range(1, T + 1)]
        a0_pows = [MultiPoly.const(ctx, 1)]
        for _ in range(T):
            a0_pows.append(a0_pows[-1] * a[0])
        nums = [dict() for _ in range(T + 1)]
        Uj = [MultiPoly.const(ctx, 1)] + [zero] * T
        for j in range(T + 1):
            b = gen_binomial(rho, j)
            if b:
                for k in range(j, T + 1):
                    if Uj[k]:
                        add_scaled(nums[k], Uj[k] * a0_pows[k - j], b)
            # next power of U, truncated
            nxt = [zero] * (T + 1)
            for p in range(T + 1):
                if not Uj[p]:
                    continue
                for s in range(1, T + 1 - p):
                    if U[s]:
                        nxt[p + s] = nxt[p + s] + Uj[p] * U[s]
            Uj = nxt
        out = tuple(MultiPoly(ctx, {e: qnorm(c) for e, c in n.items() if c}, clean=True)
                    for n in nums)
        return cls(d, rho, out, family)

    def denominator_power(self, k: int) -> int:
        return k

    def theta_numerator(self, m: int) -> MultiPoly:
        """a0^m * theta_m, where f^rho = a0^rho (1 + sum theta_m t^m / m!)."""
        return self.numerators[m].scale(factorial(m))

    def cleared(self) -> list:
        """a0^T times each coefficient divided by a0^rho: all polynomials."""
        T = self.order
        ctx = coefficient_context(self.family, self.d)
        a0 = MultiPoly.var(ctx, f"{self.family}0")
        return [n * a0 ** (T - k) for k, n in enumerate(self.numerators)]


def derivation_tower(D, base: MultiPoly, rho, steps: int) -> list:
    """Numerators P_k with D^k(base^rho) = base^(rho - k) * P_k.

    Uses D(b^(rho-k) P) = b^(rho-k-1) [(rho-k) D(b) P + b D(P)].
    """
    rho = Fraction(rho)
    Db = D(base)
    P = MultiPoly.const(base.ctx, 1)
    out = [P]
    for k in range(steps):
        P = (Db * P).scale(rho - k) + base * D(P)
        out.append(P)
    return out


def theta_tower(d: int, rho, steps: int, family: str = "a") -> list:
    """a0^m theta_m for m = 0..steps via the raising operator E+."""
    ctx = coefficient_context(family, d)
    a0 = MultiPoly.var(ctx, f"{family}0")
    return derivation_tower(lambda P: e_plus(P, d, family), a0, rho, steps)


@lru_cache(maxsize=None)
def hilbert_source(r: int, d: int) -> MultiPoly:
    """h0 = a0^(r+1-r/d) E+^(r+1) (a0^(r/d)), a polynomial in a0..ad."""
    if r < 1 or d < 1:
        raise ValueError("need r, d >= 1")
    S = FracPowerSeries.binomial_power(d, Fraction(r, d), r + 1)
    h0 = S.numerators[r + 1].scale(factorial(r + 1))
    # the a0-power bookkeeping must leave a form of degree and weight r+1
    assert h0.is_homogeneous("a", r + 1) and h0.is_isobaric("a", r + 1)
    return h0


@lru_cache(maxsize=None)
def hilbert_covariant(r: int, d: int) -> Covariant:
    if d < 2:
        raise ValueError("Hilbert covariant needs d >= 2")
    N = (r + 1) * (d - 2)
    h0 = hilbert_source(r, d)
    if h0.is_zero():
        return zero_covariant(d, r + 1, N)
    cov = covariant_from_source(h0, d)
    assert cov.order == N
    return cov


def alpha_columns(F: BinaryForm, r: int) -> list:
    """C_j = (x1^(r-j) x2^j, F)_1 for j = 0..r."""
    out = []
    for j in range(r + 1):
        mono = [0] * (r + 1)
        mono[j] = 1
        A = BinaryForm.from_monomial_coeffs(mono, F.var)
        out.append(transvectant(A, F, 1))
    return out


@lru_cache(maxsize=None)
def goettingen_basic(r: int, d: int) -> Covariant:
    """Wronskian of (x1^(r-i) x2^i, F)_1, i = 0..r, for the generic d-ic."""
    if d < 2 or r < 1:
        raise ValueError("need d >= 2 and r >= 1")
    N = (r + 1) * (d - 2)
    if r % d == 0:
        return zero_covariant(d, r + 1, N)
    C = alpha_columns(BinaryForm.generic(d), r)
    W = wronskian(C)
    return Covariant.from_form(W, d, r + 1)


def kappa_scalar(r: int, d: int) -> Fraction:
    """The scalar with source(Gott_{r,d}) = kappa * h0."""
    if d < 2 or r < 1:
        raise ValueError("need d >= 2 and r >= 1")
    num = 1
    for i in range(r + 1):
        num *= factorial(i) * factorial(d + i - 2)
    return qnorm(Fraction(num, (r * factorial(d - 2)) ** (r + 1)))


# -- the general recipe ---------------------------------------------------------

def _pair_names(fam: str, i: int) -> tuple:
    return (f"{fam}_{i}_1", f"{fam}_{i}_2")


def _form_in(form: BinaryForm, ctx: Context, v1: str, v2: str) -> MultiPoly:
    """sum C(n,k) c_k v1^(n-k) v2^k in ``ctx``."""
    n = form.order
    i1, i2 = ctx.index(v1), ctx.index(v2)
    parts = []
    for k, c in enumerate(form.coeffs):
        if not c:
            continue
        e = [0] * len(ctx)
        e[i1], e[i2] = n - k, k
        parts.append(c.extend(ctx) * MultiPoly(ctx, {tuple(e): comb(n, k)}, clean=True))
    return poly_sum(parts, ctx)


def _permute_rows(P: MultiPoly, fam: str, sigma: tuple) -> MultiPoly:
    """Rename fam_i_j to fam_sigma(i)_j."""
    ctx = P.ctx
    perm = list(range(len(ctx)))
    for i, s in enumerate(sigma):
        for j in (1, 2):
            perm[ctx.index(f"{fam}_{i}_{j}")] = ctx.index(f"{fam}_{s}_{j}")
    out = {}
    for e, c in P.terms.items():
        v = [0] * len(e)
        for p, k in enumerate(e):
            v[perm[p]] = k
        out[tuple(v)] = c
    return MultiPoly(ctx, out, clean=True)


def symmetrized_wronskian(r: int, d: int) -> MultiPoly:
    """W# : sum over sigma of the determinant with y_sigma(i) in row i."""
    ctx_a = coefficient_context("a", d)
    Y = VarFamily.grid("y", range(r + 1), (1, 2))
    ctx = ctx_a.union(Context([Y]))
    C = alpha_columns(BinaryForm.generic(d), r)
    rows = []
    for i in range(r + 1):
        y1, y2 = _pair_names("y", i)
        rows.append([_form_in(C[i].partial(r - j, j), ctx, y1, y2) for j in range(r + 1)])
    W = det(rows, MultiPoly.zero(ctx), MultiPoly.const(ctx, 1))
    perms = list(itertools.permutations(range(r + 1)))
    return poly_sum((_permute_rows(W, "y", s) for s in perms), ctx)


def total_polarization(psi: Covariant, copies: int) -> MultiPoly:
    """Polarise each coefficient of psi (degree ``copies`` in its family).

    The coefficient of prod_i b_{i,k_i} is (1/copies!) times the mixed
    partial derivative of psi in b_{k_0} .. b_{k_{copies-1}}.  The result
    lives in the x-variables and the grid b_{i,k}.
    """
    n = psi.d
    fam = psi.family
    Bg = VarFamily.grid("b", range(copies), range(n + 1))
    ctx = Context([binary_family(psi.var), Bg])
    x1, x2 = ctx.index(f"{psi.var}1"), ctx.index(f"{psi.var}2")
    cols = [[ctx.index(f"b_{i}_{k}") for k in range(n + 1)] for i in range(copies)]
    lo, hi = psi.ctx.span(fam)
    q = psi.order
    out: dict = {}
    for j, c in enumerate(psi.coeffs):
        for e, v in c.terms.items():
            mult = e[lo:hi]
            seq = [k for k, m in enumerate(mult) for _ in range(m)]
            if len(seq) != copies:
                raise ValueError("psi has the wrong degree for this polarisation")
            weight = Fraction(comb(q, j))
            for m in mult:
                weight *= factorial(m)
            weight /= factorial(copies)
            for arr in set(itertools.permutations(seq)):
                ex = [0] * len(ctx)
                ex[x1], ex[x2] = q - j, j
                for i, k in enumerate(arr):
                    ex[cols[i][k]] = 1
                ex = tuple(ex)
                out[ex] = out.get(ex, 0) + v * weight
    return MultiPoly(ctx, {e: qnorm(c) for e, c in out.items() if c}, clean=True)


def hat_substitution(Pt: MultiPoly, copies: int, n: int) -> MultiPoly:
    """b_{ik} -> z_{i2}^(n-k) (-z_{i1})^k / n!  on a polarised form."""
    Z = VarFamily.grid("z", range(copies), (1, 2))
    target = Context([binary_family("x"), Z])
    bind = {}
    for i in range(copies):
        z1, z2 = _pair_names("z", i)
        for k in range(n + 1):
            bind[f"b_{i}_{k}"] = MultiPoly.monomial(
                target, {z1: k, z2: n - k}, Fraction((-1) ** k, factorial(n)))
    return Pt.subs(bind, target)


def omega_contract(A: MultiPoly, B: MultiPoly, pairs, n: int, literal: bool = False) -> MultiPoly:
    """prod_i Omega_{y_i z_i}^n applied to A*B, A free of z and B free of y.

    ``pairs`` lists ((y1, y2), (z1, z2)) names.  A must have degree n in each
    y pair and B degree n in each z pair; then on y1^e1 y2^e2 z1^f1 z2^f2 the
    operator Omega^n gives (-1)^e2 n! e1! e2! if (f1, f2) = (e2, e1), else 0.
    """
    ys = [p[0] for p in pairs]
    zs = [p[1] for p in pairs]
    if literal:
        from .binary import omega_apply_named

        ctx = A.ctx.union(B.ctx)
        P = A.extend(ctx) * B.extend(ctx)
        for y, z in zip(ys, zs):
            P = omega_apply_named(P, n, y, z)
        keep = ctx
        for fam in {yy.split("_")[0] for yy, _ in ys} | {zz.split("_")[0] for zz, _ in zs}:
            keep = keep.without(fam)
        return P.restrict(keep)

    def split(P, names):
        idx = [(P.ctx.index(u), P.ctx.index(v)) for u, v in names]
        fams = {u.split("_")[0] for u, _ in names}
        rest_ctx = P.ctx
        for f in fams:
            rest_ctx = rest_ctx.without(f)
        rest_pos = [P.ctx.index(nm) for nm in rest_ctx.names]
        groups: dict = {}
        for e, c in P.terms.items():
            key = tuple((e[i], e[j]) for i, j in idx)
            if any(a + b != n for a, b in key):
                raise ValueError("omega_contract needs full degree in every pair")
            groups.setdefault(key, {})[tuple(e[p] for p in rest_pos)] = c
        return rest_ctx, {k: MultiPoly(rest_ctx, v, clean=True) for k, v in groups.items()}

    ctxA, GA = split(A, ys)
    ctxB, GB = split(B, zs)
    out_ctx = ctxA.union(ctxB)
    nf = factorial(n)
    acc: dict = {}
    for key, PA in GA.items():
        PB = GB.get(tuple((e2, e1) for e1, e2 in key))
        if PB is None:
            continue
        s = 1
        for e1, e2 in key:
            s *= (-1) ** e2 * nf * factorial(e1) * factorial(e2)
        add_scaled(acc, PA.extend(out_ctx) * PB.extend(out_ctx), s)
    return MultiPoly(out_ctx, {e: qnorm(c) for e, c in acc.items() if c}, clean=True)


def goettingen_general(psi: Covariant, r: int, d: int, allow_large: bool = False,
                       literal_omega: bool = False) -> Covariant:
    """Gott_psi(F) for a covariant psi of the generic order-(d-2) form."""
    if psi.d != d - 2:
        raise ValueError(f"psi must be a covariant of an order-{d - 2} form")
    if psi.degree != r + 1:
        raise ValueError(f"psi must have degree {r + 1}")
    if r > MAX_SYMMETRIZATION_R and not allow_large:
        raise ValueError(f"r = {r} exceeds the symmetrisation limit {MAX_SYMMETRIZATION_R}")
    q = psi.order
    if r % d == 0:
        return zero_covariant(d, r + 1, q)
    n = d - 2
    Wsharp = symmetrized_wronskian(r, d)
    Psi_hat = hat_substitution(total_polarization(psi, r + 1), r + 1, n)
    pairs = [(_pair_names("y", i), _pair_names("z", i)) for i in range(r + 1)]
    res = omega_contract(Wsharp, Psi_hat, pairs, n, literal=literal_omega)
    form = BinaryForm.from_poly(res, "x", q)
    return Covariant.from_form(form, d, r + 1)


# -- identities and evaluation ----------------------------------------------------

@dataclass
class PolarCheck:
    ok: bool
    scalar: Fraction | None

    def __bool__(self):
        return self.ok


def polar_identity_check(r: int, d: int) -> PolarCheck:
    """(x1 y2 - x2 y1)^(r+1) Hilb  vs  F^(r+1-r/d) (y.grad)^(r+1) F^(r/d).

    The right side is base^0 * P_{r+1} from the derivation tower with
    D = y1 d/dx1 + y2 d/dx2 and base F.  Returns the scalar c with
    lhs = c * rhs when they are proportional.
    """
    ctx_a = coefficient_context("a", d)
    ctx = ctx_a.union(Context([binary_family("x"), binary_family("y")]))
    F = BinaryForm.generic(d).to_poly(ctx)
    y1, y2 = MultiPoly.var(ctx, "y1"), MultiPoly.var(ctx, "y2")
    x1, x2 = MultiPoly.var(ctx, "x1"), MultiPoly.var(ctx, "x2")

    def D(P):
        return y1 * P.diff("x1") + y2 * P.diff("x2")

    rhs = derivation_tower(D, F, Fraction(r, d), r + 1)[-1]
    H = hilbert_covariant(r, d).to_poly().extend(ctx)
    lhs = (x1 * y2 - x2 * y1) ** (r + 1) * H
    c = proportionality(lhs, rhs)
    return PolarCheck(c is not None and (c != 0 or (lhs.is_zero() and rhs.is_zero())), c)


def evaluate_covariant(phi: Covariant, F: BinaryForm, images: MonomialImages | None = None) -> BinaryForm:
    """Substitute the Cayley coefficients of F for a0..ad in every phi_k."""
    if F.order != phi.d:
        raise ValueError(f"covariant of {phi.d}-ics evaluated on a form of order {F.order}")
    names = phi.ctx.names
    if F.is_rational():
        vals = dict(zip(names, F.rational_coeffs()))
        out = [c.evaluate(vals) for c in phi.coeffs]
        return BinaryForm(phi.order, out, phi.var)
    if images is None:
        images = MonomialImages(phi.ctx, dict(zip(names, F.coeffs)), F.cctx)
    return BinaryForm(phi.order, [images.apply(c) for c in phi.coeffs], phi.var, F.cctx)
