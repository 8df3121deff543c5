"""n-ary forms, restriction to a symbolic line, and umbral evaluation of
bracket monomials."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .binary import BinaryForm
from .exact import EMPTY, Context, MonomialImages, MultiPoly, VarFamily, add_scaled, det, parse_poly, qnorm
from .exact.poly import infer_context
from .goettingen import evaluate_covariant, hilbert_covariant, kappa_scalar


def compositions(d: int, n: int):
    """All n-tuples of nonnegative ints summing to d, descending lex."""
    if n == 1:
        yield (d,)
        return
    for i in range(d, -1, -1):
        for rest in compositions(d - i, n - 1):
            yield (i,) + rest


def multinomial(d: int, I) -> int:
    out = factorial(d)
    for i in I:
        out //= factorial(i)
    return out


def point_family(name: str, n: int) -> VarFamily:
    return VarFamily(name, tuple(range(1, n + 1)))


class NaryForm:
    """Gamma = sum over |I| = d of (d choose I) a_I x^I."""

    __slots__ = ("n", "order", "coeffs", "cctx")

    def __init__(self, n: int, order: int, coeffs: dict, cctx: Context | None = None):
        if n < 2:
            raise ValueError("n-ary forms need n >= 2")
        if cctx is None:
            cctx = EMPTY
            for c in coeffs.values():
                if isinstance(c, MultiPoly):
                    cctx = cctx.union(c.ctx)
        out = {}
        for I, c in coeffs.items():
            I = tuple(I)
            if len(I) != n or sum(I) != order or min(I) < 0:
                raise ValueError(f"bad multi-index {I} for n={n}, d={order}")
            c = c.extend(cctx) if isinstance(c, MultiPoly) else MultiPoly.const(cctx, c)
            if c:
                out[I] = c
        self.n, self.order, self.coeffs, self.cctx = n, order, out, cctx

    def coeff(self, I) -> MultiPoly:
        return self.coeffs.get(tuple(I), MultiPoly.zero(self.cctx))

    def poly_context(self) -> Context:
        return self.cctx.union(Context([point_family("x", self.n)]))

    def to_poly(self, ctx: Context | None = None) -> MultiPoly:
        ctx = ctx or self.poly_context()
        xs = [ctx.index(f"x{i}") for i in range(1, self.n + 1)]
        out: dict = {}
        for I, c in self.coeffs.items():
            c = c.extend(ctx) if c.ctx != ctx else c
            mult = multinomial(self.order, I)
            for e, v in c.terms.items():
                e = list(e)
                for p, k in zip(xs, I):
                    e[p] += k
                e = tuple(e)
                out[e] = out.get(e, 0) + v * mult
        return MultiPoly(ctx, {e: qnorm(v) for e, v in out.items() if v}, clean=True)

    @classmethod
    def from_poly(cls, P: MultiPoly, n: int, order: int | None = None) -> "NaryForm":
        if not P.ctx.has_family("x"):
            cctx, parts = P.ctx, {(0,) * n: P}
        else:
            cctx = P.ctx.without("x")
            ix = P.ctx.family("x").indices
            if any(not isinstance(i, int) or not 1 <= i <= n for i in ix):
                raise ValueError(f"x-variables {ix} do not fit n = {n}")
            parts = {}
            for k, c in P.coefficients_in("x").items():
                I = [0] * n
                for i, e in zip(ix, k):
                    I[i - 1] = e
                parts[tuple(I)] = c
        if order is None:
            degs = {sum(k) for k in parts}
            if len(degs) != 1:
                raise ValueError("polynomial is not homogeneous in x")
            order = degs.pop()
        coeffs = {}
        for I, c in parts.items():
            if sum(I) != order:
                raise ValueError(f"polynomial is not a form of order {order}")
            coeffs[I] = c.scale(Fraction(1, multinomial(order, I)))
        return cls(n, order, coeffs, cctx)

    def __mul__(self, other: "NaryForm") -> "NaryForm":
        ctx = self.poly_context().union(other.poly_context())
        return NaryForm.from_poly(self.to_poly(ctx) * other.to_poly(ctx), self.n,
                                  self.order + other.order)

    def __pow__(self, k: int) -> "NaryForm":
        P = self.to_poly()
        return NaryForm.from_poly(P ** k, self.n, self.order * k)

    def __eq__(self, other):
        return (isinstance(other, NaryForm) and (self.n, self.order) == (other.n, other.order)
                and self.to_poly() == other.to_poly())

    def __repr__(self):
        return f"NaryForm(n={self.n}, order={self.order})"

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.order,
                "coefficients": {"(" + ",".join(map(str, I)) + ")": str(c)
                                 for I, c in sorted(self.coeffs.items(), reverse=True)}}

    @classmethod
    def from_json(cls, data) -> "NaryForm":
        if isinstance(data, str):
            data = json.loads(data)
        n, d = int(data["n"]), int(data["order"])
        texts = {}
        for key, val in data["coefficients"].items():
            I = tuple(int(x) for x in re.findall(r"-?\d+", key))
            texts[I] = str(val)
        used = set()
        for t in texts.values():
            used |= parse_poly(t).variables()
        ctx = infer_context(used) if used else EMPTY
        return cls(n, d, {I: parse_poly(t, ctx) for I, t in texts.items()}, ctx)


def linear_form(coeffs) -> NaryForm:
    """sum c_i x_i as an n-ary form of order 1."""
    n = len(coeffs)
    return NaryForm(n, 1, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})


def random_nary_form(n: int, d: int, rng: random.Random, lo: int = -5, hi: int = 5) -> NaryForm:
    return NaryForm(n, d, {I: rng.randint(lo, hi) for I in compositions(d, n)})


def fermat_form(n: int, d: int) -> NaryForm:
    return NaryForm(n, d, {tuple(d if i == j else 0 for j in range(n)): 1 for i in range(n)})


# -- restriction to a line -------------------------------------------------------------------

def restrict_to_line(G: NaryForm, p=None, q=None, var: str = "l") -> BinaryForm:
    """Substitute x_i = l1 p_i + l2 q_i; a binary form in (l1, l2).

    With p, q omitted they are the symbolic families p1..pn, q1..qn.
    """
    n = G.n
    if p is None or q is None:
        pq = Context([point_family("p", n), point_family("q", n)])
        p = [MultiPoly.var(pq, f"p{i}") for i in range(1, n + 1)]
        q = [MultiPoly.var(pq, f"q{i}") for i in range(1, n + 1)]
    if len(p) != n or len(q) != n:
        raise ValueError("p and q need n entries")
    pctx = EMPTY
    for v in list(p) + list(q):
        if isinstance(v, MultiPoly):
            pctx = pctx.union(v.ctx)
    lam = Context([VarFamily(var, (1, 2))])
    target = G.cctx.union(pctx).union(lam)
    l1, l2 = MultiPoly.var(target, f"{var}1"), MultiPoly.var(target, f"{var}2")

    def lift(v):
        return v.extend(target) if isinstance(v, MultiPoly) else MultiPoly.const(target, v)

    bind = {f"x{i + 1}": l1 * lift(p[i]) + l2 * lift(q[i]) for i in range(n)}
    P = G.to_poly().subs(bind, target)
    return BinaryForm.from_poly(P, var, G.order)


def transferred_goettingen(G: NaryForm, r: int, p=None, q=None) -> BinaryForm:
    """Gott_{r,d} = kappa * Hilb_{r,d} evaluated on the line restriction."""
    Theta = restrict_to_line(G, p, q)
    H = hilbert_covariant(r, G.order)
    return evaluate_covariant(H, Theta).scale(kappa_scalar(r, G.order)).rename_var(Theta.var)


def transfer_vanishing_test(G: NaryForm, r: int) -> bool:
    if G.order < 2:
        raise ValueError("need d >= 2")
    return transferred_goettingen(G, r).is_zero()


BITANGENT_LINES = (
    (("u3", 0, "-u1"), ("u2", "-u1", 0)),
    ((0, "u3", "-u2"), ("u2", "-u1", 0)),
    ((0, "u3", "-u2"), ("u3", 0, "-u1")),
)


def bitangent_system(G: NaryForm) -> list:
    """The three sextics E_i(l) in l1, l2 with coefficients in u1, u2, u3."""
    if G.n != 3 or G.order != 4:
        raise ValueError("bitangent system needs a ternary quartic")
    uctx = Context([point_family("u", 3)])

    def val(t):
        if t == 0:
            return MultiPoly.zero(uctx)
        sign = -1 if t.startswith("-") else 1
        return MultiPoly.var(uctx, t.lstrip("-")).scale(sign)

    out = []
    for p, q in BITANGENT_LINES:
        out.append(transferred_goettingen(G, 2, [val(t) for t in p], [val(t) for t in q]))
    return out


# -- bracket expressions -------------------------------------------------------------------------

class BracketParseError(ValueError):
    pass


@dataclass(frozen=True)
class BracketFactor:
    kind: str  # "bracket" or "linear"
    items: tuple  # letters, with "u" last for dual brackets
    power: int = 1

    def __str__(self):
        body = "(" + " ".join(self.items) + ")" if self.kind == "bracket" else f"{self.items[0]}_x"
        return body + (f"^{self.power}" if self.power != 1 else "")


@dataclass(frozen=True)
class BracketExpr:
    letters: tuple
    factors: tuple

    def degrees(self) -> dict:
        out = {l: 0 for l in self.letters}
        for f in self.factors:
            for it in f.items:
                if it != "u":
                    out[it] += f.power
        return out

    def arity(self) -> int | None:
        ar = {len(f.items) for f in self.factors if f.kind == "bracket"}
        return ar.pop() if ar else None

    def x_degree(self) -> int:
        return sum(f.power for f in self.factors if f.kind == "linear")

    def u_degree(self) -> int:
        return sum(f.power for f in self.factors if f.kind == "bracket" and "u" in f.items)

    def relabel(self, mapping: dict) -> "BracketExpr":
        fs = tuple(BracketFactor(f.kind, tuple(mapping.get(i, i) for i in f.items), f.power)
                   for f in self.factors)
        letters = tuple(mapping.get(l, l) for l in self.letters)
        return BracketExpr(letters, fs)

    def __str__(self):
        return " ".join(str(f) for f in self.factors)


_FACTOR = re.compile(r"\s*(?:\(([^()]*)\)|([a-z])_x)(?:\s*\^\s*(\d+))?\s*\*?")


def parse_bracket(text: str) -> BracketExpr:
    """Parse e.g. "(ab u)^2 (ac u) a_x b_x^2 c_x^3"."""
    pos, factors, letters = 0, [], []
    text = text.strip()
    if not text:
        raise BracketParseError("empty bracket expression")
    while pos < len(text):
        m = _FACTOR.match(text, pos)
        if not m or m.end() == pos:
            raise BracketParseError(f"malformed factor near {text[pos:pos + 10]!r}")
        pos = m.end()
        power = int(m.group(3)) if m.group(3) else 1
        if power < 1:
            raise BracketParseError("powers must be positive")
        if m.group(1) is not None:
            items = tuple(m.group(1).replace(" ", ""))
            if any(not ch.isalpha() or not ch.islower() or ch == "x" for ch in items):
                raise BracketParseError(f"bad bracket ({m.group(1)})")
            if len(set(items)) != len(items):
                raise BracketParseError(f"repeated entry in bracket ({m.group(1)})")
            if "u" in items[:-1]:
                raise BracketParseError("u must come last in a bracket")
            if len(items) < 2:
                raise BracketParseError("brackets need at least two entries")
            factors.append(BracketFactor("bracket", items, power))
        else:
            l = m.group(2)
            if l in ("u", "x"):
                raise BracketParseError(f"{l} cannot be a letter")
            factors.append(BracketFactor("linear", (l,), power))
        for it in factors[-1].items:
            if it != "u" and it not in letters:
                letters.append(it)
    E = BracketExpr(tuple(letters), tuple(factors))
    ar = {len(f.items) for f in E.factors if f.kind == "bracket"}
    if len(ar) > 1:
        raise BracketParseError(f"inconsistent bracket arities {sorted(ar)}")
    return E


def umbral_evaluate(E: BracketExpr, G: NaryForm) -> MultiPoly:
    """Expand E in the letter coordinates, then replace each letter's
    degree-d monomial l^I by a_I."""
    n, d = G.n, G.order
    ar = E.arity()
    if ar is not None and ar != n:
        raise ValueError(f"bracket arity {ar} does not match n = {n}")
    for l, k in E.degrees().items():
        if k != d:
            raise ValueError(f"letter {l} has degree {k}, expected {d}")
    fams = [VarFamily("L" + l, tuple(range(1, n + 1))) for l in E.letters]
    outer = Context([point_family("x", n), point_family("u", n)])
    ctx = Context(fams).union(outer)

    def vec(item):
        fam = "u" if item == "u" else "L" + item
        return [MultiPoly.var(ctx, f"{fam}{i}") for i in range(1, n + 1)]

    P = MultiPoly.const(ctx, 1)
    for f in E.factors:
        if f.kind == "bracket":
            base = det([vec(it) for it in f.items], MultiPoly.zero(ctx), MultiPoly.const(ctx, 1))
        else:
            base = MultiPoly.zero(ctx)
            for a, x in zip(vec(f.items[0]), [MultiPoly.var(ctx, f"x{i}") for i in range(1, n + 1)]):
                base = base + a * x
        P = P * base ** f.power
    target = G.cctx.union(outer)
    spans = [ctx.span(fm.name) for fm in fams]
    opos = [ctx.index(nm) for nm in outer.names]
    tpos = [target.index(nm) for nm in outer.names]
    acc: dict = {}
    for e, c in P.terms.items():
        val = None
        for lo, hi in spans:
            a = G.coeffs.get(e[lo:hi])
            if a is None:
                val = None
                break
            val = a if val is None else val * a
        if val is None:
            continue
        mono = [0] * len(target)
        for p, t in zip(opos, tpos):
            mono[t] = e[p]
        val = val.extend(target) * MultiPoly(target, {tuple(mono): 1}, clean=True)
        add_scaled(acc, val, c)
    return MultiPoly(target, {k: qnorm(v) for k, v in acc.items() if v}, clean=True)


TGOTT_24 = "(ab u)^2 (ac u) a_x b_x^2 c_x^3"
TGOTT_24_ALT = "(ab u) (ac u)^2 a_x b_x^3 c_x^2"
CONCOMITANT_63 = "(abc) (ab u)^2 (ac u) b_x c_x^2"


# -- working modulo the identical form u_x ------------------------------------------------------

def reduce_identical(P: MultiPoly, n: int) -> MultiPoly:
    """Normal form of P modulo u_x = x1 u1 + ... + xn un.

    x_n^k P is rewritten with u_n x_n -> -(x1 u1 + ... + x_{n-1} u_{n-1}),
    k the u_n-degree of P.  Since u_x is prime and x_n is not in (u_x),
    the result is zero exactly when u_x divides P.
    """
    ctx = P.ctx
    un, xn = ctx.index(f"u{n}"), ctx.index(f"x{n}")
    k = max((e[un] for e in P.terms), default=0)
    L = MultiPoly.zero(ctx)
    for i in range(1, n):
        L = L - MultiPoly.var(ctx, f"x{i}") * MultiPoly.var(ctx, f"u{i}")
    powers = [MultiPoly.const(ctx, 1)]
    for _ in range(k):
        powers.append(powers[-1] * L)
    acc: dict = {}
    for e, c in P.terms.items():
        j = e[un]
        v = list(e)
        v[un] = 0
        v[xn] += k - j
        add_scaled(acc, MultiPoly(ctx, {tuple(v): 1}, clean=True) * powers[j], c)
    return MultiPoly(ctx, {m: qnorm(c) for m, c in acc.items() if c}, clean=True)


def vanishes_modulo_identical(P: MultiPoly, n: int) -> bool:
    return reduce_identical(P, n).is_zero()


def concomitant_vanishes(text: str, G: NaryForm) -> bool:
    """Umbral value of a bracket expression is zero modulo u_x."""
    P = umbral_evaluate(parse_bracket(text), G)
    return P.is_zero() or vanishes_modulo_identical(P, G.n)


# -- the ideal of double conics -------------------------------------------------------------------

def double_conic_ideal_dim(m: int) -> int:
    """dim of the degree-m piece of the ideal of {Q^2} among ternary quartics.

    Kernel of a_I -> (coefficient I of Q^2) on degree-m monomials in the 15
    quartic coefficients, Q a generic conic; split by torus weight.
    """
    from .ideals import exact_rank

    qctx = Context([VarFamily("q", tuple(range(6)))])
    conic_idx = list(compositions(2, 3))
    Q = NaryForm(3, 2, {I: MultiPoly.var(qctx, f"q{k}") for k, I in enumerate(conic_idx)}, qctx)
    sq = Q ** 2
    quartic_idx = list(compositions(4, 3))
    actx = Context([VarFamily("a", tuple(range(len(quartic_idx))))])
    imgs = MonomialImages(actx, {f"a{k}": sq.coeff(I) for k, I in enumerate(quartic_idx)}, qctx)

    def monos(k, start):
        if k == 0:
            yield ()
            return
        for i in range(start, len(quartic_idx)):
            for rest in monos(k - 1, i):
                yield (i,) + rest

    blocks: dict = {}
    for mono in monos(m, 0):
        w = tuple(sum(quartic_idx[i][j] for i in mono) for j in range(3))
        blocks.setdefault(w, []).append(mono)
    total = 0
    for w, ms in blocks.items():
        rows, cols = [], set()
        for mono in ms:
            e = [0] * len(quartic_idx)
            for i in mono:
                e[i] += 1
            img = imgs.image(tuple(e))
            rows.append(dict(img.terms))
            cols.update(img.terms)
        total += len(ms) - exact_rank(rows, sorted(cols))
    return total
