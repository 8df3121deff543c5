"""Sparse multivariate polynomials over Q on named variable families.

A :class:`Context` is an ordered, immutable tuple of :class:`VarFamily`
objects.  Every :class:`MultiPoly` carries its context and a dict mapping
exponent tuples (one slot per variable of the context) to nonzero
coefficients.  Coefficients are kept as ``int`` whenever they are integral
and as :class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain
from operator import add
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class ContextError(ValueError):
    """Raised when polynomials from incompatible contexts are combined."""


class UnknownVariable(KeyError):
    pass


def qnorm(c):
    """Collapse an integral Fraction to int; leave everything else alone."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_scalar(c) -> Scalar:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return qnorm(c)
    if isinstance(c, str):
        return qnorm(Fraction(c))
    raise TypeError(f"not an exact scalar: {c!r}")


@dataclass(frozen=True)
class VarFamily:
    """A named family of variables.

    ``indices`` is a tuple of ints (giving names like ``a0 .. a6``) or of
    ``(i, j)`` pairs (giving names like ``y_0_1``).
    """

    name: str
    indices: tuple

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z]+", self.name):
            raise ValueError(f"family name must be letters only: {self.name!r}")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"repeated index in family {self.name}")
        object.__setattr__(self, "indices", tuple(self.indices))

    @classmethod
    def flat(cls, name: str, count: int, start: int = 0) -> "VarFamily":
        return cls(name, tuple(range(start, start + count)))

    @classmethod
    def grid(cls, name: str, rows: Iterable[int], cols: Iterable[int]) -> "VarFamily":
        cols = tuple(cols)
        return cls(name, tuple((i, j) for i in rows for j in cols))

    @property
    def var_names(self) -> tuple:
        out = []
        for ix in self.indices:
            if isinstance(ix, tuple):
                out.append(f"{self.name}_{ix[0]}_{ix[1]}")
            else:
                out.append(f"{self.name}{ix}")
        return tuple(out)

    def __len__(self):
        return len(self.indices)


class Context:
    """Ordered immutable list of variable families."""

    __slots__ = ("families", "names", "_index", "_offsets", "_hash")

    def __init__(self, families: Iterable[VarFamily] = ()):
        families = tuple(families)
        seen = set()
        for f in families:
            if f.name in seen:
                raise ContextError(f"duplicate family {f.name!r}")
            seen.add(f.name)
        self.families = families
        self.names = tuple(chain.from_iterable(f.var_names for f in families))
        if len(set(self.names)) != len(self.names):
            raise ContextError("variable names collide across families")
        self._index = {n: i for i, n in enumerate(self.names)}
        offsets, pos = {}, 0
        for f in families:
            offsets[f.name] = (pos, pos + len(f))
            pos += len(f)
        self._offsets = offsets
        self._hash = hash(families)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return self is other or (isinstance(other, Context) and self.families == other.families)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Context(" + ", ".join(f.name for f in self.families) + ")"

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def family(self, name: str) -> VarFamily:
        for f in self.families:
            if f.name == name:
                return f
        raise UnknownVariable(name)

    def has_family(self, name: str) -> bool:
        return name in self._offsets

    def span(self, family: str) -> tuple:
        """(start, stop) positions of a family's variables."""
        try:
            return self._offsets[family]
        except KeyError:
            raise UnknownVariable(family) from None

    def union(self, *others: "Context") -> "Context":
        fams = list(self.families)
        by_name = {f.name: f for f in fams}
        for o in others:
            for f in o.families:
                g = by_name.get(f.name)
                if g is None:
                    fams.append(f)
                    by_name[f.name] = f
                elif g != f:
                    raise ContextError(f"family {f.name!r} declared with different indices")
        if len(fams) == len(self.families):
            return self
        return Context(fams)

    def without(self, *family_names: str) -> "Context":
        return Context(f for f in self.families if f.name not in family_names)

    def issubcontext(self, other: "Context") -> bool:
        ofs = set(other.families)
        return all(f in ofs for f in self.families)

    def embedding(self, bigger: "Context") -> list:
        """Positions in ``bigger`` of this context's variables."""
        return [bigger.index(n) for n in self.names]


EMPTY = Context(())


def _monomial_str(names, exps) -> str:
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def _scalar_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class MultiPoly:
    """Exact sparse polynomial; immutable by convention."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping | None = None, *, clean: bool = False):
        self.ctx = ctx
        if terms is None:
            self.terms = {}
        elif clean:
            self.terms = terms
        else:
            n = len(ctx)
            out = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ContextError(f"exponent {e} does not fit context of {n} variables")
                if any((not isinstance(x, int)) or x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e}")
                c = as_scalar(c)
                if c:
                    out[e] = qnorm(out.get(e, 0) + c)
                    if not out[e]:
                        del out[e]
            self.terms = out

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, ctx: Context) -> "MultiPoly":
        return cls(ctx, {}, clean=True)

    @classmethod
    def const(cls, ctx: Context, c) -> "MultiPoly":
        c = as_scalar(c)
        return cls(ctx, {(0,) * len(ctx): c} if c else {}, clean=True)

    @classmethod
    def var(cls, ctx: Context, name: str) -> "MultiPoly":
        e = [0] * len(ctx)
        e[ctx.index(name)] = 1
        return cls(ctx, {tuple(e): 1}, clean=True)

    @classmethod
    def monomial(cls, ctx: Context, powers: Mapping[str, int], c=1) -> "MultiPoly":
        e = [0] * len(ctx)
        for n, k in powers.items():
            e[ctx.index(n)] += k
        return cls(ctx, {tuple(e): c})

    # -- basic predicates ---------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), 0)

    def __len__(self):
        return len(self.terms)

    # -- context handling ---------------------------------------------
    def extend(self, ctx: Context) -> "MultiPoly":
        """Embed into a context that contains every family of ours."""
        if ctx == self.ctx:
            return self
        if not self.ctx.issubcontext(ctx):
            raise ContextError(f"{self.ctx} does not embed into {ctx}")
        pos = self.ctx.embedding(ctx)
        n = len(ctx)
        out = {}
        for e, c in self.terms.items():
            v = [0] * n
            for p, k in zip(pos, e):
                v[p] = k
            out[tuple(v)] = c
        return MultiPoly(ctx, out, clean=True)

    def restrict(self, ctx: Context) -> "MultiPoly":
        """Project onto a smaller context; every dropped variable must be absent."""
        if ctx == self.ctx:
            return self
        keep = [self.ctx.index(n) for n in ctx.names]
        keep_set = set(keep)
        drop = [i for i in range(len(self.ctx)) if i not in keep_set]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in drop):
                raise ContextError("cannot drop a variable that occurs in the polynomial")
            out[tuple(e[i] for i in keep)] = c
        return MultiPoly(ctx, out, clean=True)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ctx == self.ctx:
                return self, other
            if other.ctx.issubcontext(self.ctx):
                return self, other.extend(self.ctx)
            if self.ctx.issubcontext(other.ctx):
                return self.extend(other.ctx), other
            raise ContextError(f"context mismatch: {self.ctx} vs {other.ctx}")
        return self, MultiPoly.const(self.ctx, other)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        a, b = self._coerce(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = qnorm(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly(a.ctx, out, clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ctx, {e: -c for e, c in self.terms.items()}, clean=True)

    def __sub__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = as_scalar(c)
        if not c:
            return MultiPoly.zero(self.ctx)
        if c == 1:
            return self
        return MultiPoly(self.ctx, {e: qnorm(v * c) for e, v in self.terms.items()}, clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._coerce(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = {}
        get = out.get
        for e2, c2 in b.terms.items():
            for e1, c1 in a.terms.items():
                e = tuple(map(add, e1, e2))
                v = get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(a.ctx, {e: qnorm(c) for e, c in out.items() if c}, clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(Fraction(1) / other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("power must be a nonnegative integer")
        result = MultiPoly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        try:
            a, b = self._coerce(other)
        except ContextError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus and substitution -------------------------------------
    def diff(self, var: str, k: int = 1) -> "MultiPoly":
        i = self.ctx.index(var)
        out = {}
        for e, c in self.terms.items():
            n = e[i]
            if n < k:
                continue
            f = 1
            for j in range(k):
                f *= n - j
            v = list(e)
            v[i] = n - k
            out[tuple(v)] = c * f
        return MultiPoly(self.ctx, out, clean=True)

    def subs(self, bindings: Mapping[str, object], ctx: Context | None = None) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials or scalars.

        The result lives in ``ctx`` if given, else in the union of our
        context and the contexts of the replacements.
        """
        idx = {}
        for name, val in bindings.items():
            idx[self.ctx.index(name)] = val
        if ctx is None:
            ctx = self.ctx
            for val in bindings.values():
                if isinstance(val, MultiPoly):
                    ctx = ctx.union(val.ctx)
        repl = {}
        for i, val in idx.items():
            if isinstance(val, MultiPoly):
                repl[i] = val.extend(ctx)
            else:
                repl[i] = MultiPoly.const(ctx, val)
        keep = [i for i in range(len(self.ctx)) if i not in repl]
        keep_pos = [ctx.index(self.ctx.names[i]) for i in keep]
        n = len(ctx)
        order = sorted(repl)
        powcache = {i: [MultiPoly.const(ctx, 1)] for i in order}

        def power(i, k):
            lst = powcache[i]
            while len(lst) <= k:
                lst.append(lst[-1] * repl[i])
            return lst[k]

        # group terms by the substituted part so each power product is built once
        groups: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in order)
            v = [0] * n
            for i, p in zip(keep, keep_pos):
                v[p] = e[i]
            rest = groups.setdefault(key, {})
            rest[tuple(v)] = c
        total = MultiPoly.zero(ctx)
        for key, rest in groups.items():
            prod = MultiPoly.const(ctx, 1)
            for i, k in zip(order, key):
                if k:
                    prod = prod * power(i, k)
            total = total + prod * MultiPoly(ctx, rest, clean=True)
        return total

    def evaluate(self, values: Mapping[str, object]):
        """Substitute scalars for every variable and return a scalar."""
        vals = [as_scalar(values[n]) for n in self.ctx.names]
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v ** k
            total += t
        return qnorm(Fraction(total) if not isinstance(total, int) else total)

    def coeff(self, family: str, pattern) -> "MultiPoly":
        """Coefficient of a monomial in one family, as a polynomial in the rest."""
        lo, hi = self.ctx.span(family)
        pattern = tuple(pattern)
        if len(pattern) != hi - lo:
            raise ValueError(f"pattern length {len(pattern)} does not match family {family!r}")
        sub = self.ctx.without(family)
        out = {}
        for e, c in self.terms.items():
            if e[lo:hi] == pattern:
                out[e[:lo] + e[hi:]] = c
        return MultiPoly(sub, out, clean=True)

    def coefficients_in(self, family: str) -> dict:
        """Split by monomials of one family: pattern -> polynomial in the rest."""
        lo, hi = self.ctx.span(family)
        sub = self.ctx.without(family)
        groups: dict = {}
        for e, c in self.terms.items():
            groups.setdefault(e[lo:hi], {})[e[:lo] + e[hi:]] = c
        return {k: MultiPoly(sub, v, clean=True) for k, v in groups.items()}

    # -- degree bookkeeping -------------------------------------------
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degrees_in(self, family: str) -> set:
        lo, hi = self.ctx.span(family)
        return {sum(e[lo:hi]) for e in self.terms}

    def is_homogeneous(self, family: str | None = None, degree: int | None = None) -> bool:
        if family is None:
            degs = {sum(e) for e in self.terms}
        else:
            degs = self.degrees_in(family)
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def weights_in(self, family: str) -> set:
        """Isobaric weights sum(k * n_k) over one flat family."""
        lo, hi = self.ctx.span(family)
        ix = self.ctx.family(family).indices
        return {sum(k * n for k, n in zip(ix, e[lo:hi])) for e in self.terms}

    def is_isobaric(self, family: str, weight: int | None = None) -> bool:
        ws = self.weights_in(family)
        if not ws:
            return True
        return len(ws) == 1 and (weight is None or ws == {weight})

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return {self.ctx.names[i] for i in used}

    def content(self) -> Fraction:
        """Positive rational c such that self / c is primitive with integer coefficients."""
        from math import gcd, lcm

        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            c = Fraction(c)
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # -- ordering and printing ----------------------------------------
    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order on the exponent vector."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = _monomial_str(self.ctx.names, e)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{_scalar_str(a)}*{mono}"
            else:
                body = _scalar_str(a)
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"MultiPoly({self})"


def poly_sum(polys: Iterable[MultiPoly], ctx: Context) -> MultiPoly:
    """Sum many polynomials with a single accumulator dict."""
    out: dict = {}
    get = out.get
    for p in polys:
        if p.ctx != ctx:
            p = p.extend(ctx)
        for e, c in p.terms.items():
            v = get(e)
            out[e] = c if v is None else v + c
    return MultiPoly(ctx, {e: qnorm(c) for e, c in out.items() if c}, clean=True)


def add_scaled(acc: dict, P: "MultiPoly", c) -> None:
    """acc += c * P on a raw term dict (zero entries may remain)."""
    get = acc.get
    for e, v in P.terms.items():
        w = get(e)
        acc[e] = v * c if w is None else w + v * c


class MonomialImages:
    """Images of monomials under a substitution of every variable of ``src``.

    Each monomial image is built from a smaller one by a single
    multiplication and memoised, so evaluating many polynomials under the
    same substitution shares the work.
    """

    def __init__(self, src: Context, images: Mapping[str, object], target: Context):
        self.src = src
        self.target = target
        self.images = []
        for name in src.names:
            v = images[name]
            if isinstance(v, MultiPoly):
                v = v.extend(target) if v.ctx != target else v
            else:
                v = MultiPoly.const(target, v)
            self.images.append(v)
        one = MultiPoly.const(target, 1)
        self.memo = {(0,) * len(src): one}

    def image(self, e: tuple) -> "MultiPoly":
        memo = self.memo
        got = memo.get(e)
        if got is not None:
            return got
        i = max(j for j, k in enumerate(e) if k)
        v = list(e)
        v[i] -= 1
        out = self.image(tuple(v)) * self.images[i]
        memo[e] = out
        return out

    def apply(self, P: "MultiPoly") -> "MultiPoly":
        if P.ctx != self.src:
            P = P.extend(self.src)
        acc: dict = {}
        for e, c in P.terms.items():
            add_scaled(acc, self.image(e), c)
        return MultiPoly(self.target, {e: qnorm(c) for e, c in acc.items() if c}, clean=True)


# -- text grammar -------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z]+(?:_\d+_\d+|\d+))|(?P<op>[-+*^]))"
)
_NAME = re.compile(r"([A-Za-z]+)(?:_(\d+)_(\d+)|(\d+))")


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    text = text.strip()
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
    return toks


def split_var_name(name: str):
    """'a12' -> ('a', 12); 'y_0_1' -> ('y', (0, 1))."""
    m = _NAME.fullmatch(name)
    if not m:
        raise ParseError(f"bad variable name {name!r}")
    if m.group(4) is not None:
        return m.group(1), int(m.group(4))
    return m.group(1), (int(m.group(2)), int(m.group(3)))


def _parse_terms(text: str):
    """Parse into a list of (coefficient, {name: power})."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    terms = []
    i = 0
    sign = 1
    if toks[0] == ("op", "-"):
        sign, i = -1, 1
    elif toks[0] == ("op", "+"):
        i = 1
    while True:
        coef = Fraction(sign)
        powers: dict = {}
        expect_factor = True
        first = True
        while expect_factor:
            if i >= len(toks):
                raise ParseError("dangling operator")
            kind, val = toks[i]
            if kind == "num" and first:
                coef *= Fraction(val)
                i += 1
            elif kind == "name":
                i += 1
                k = 1
                if i < len(toks) and toks[i] == ("op", "^"):
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise ParseError("exponent must be an unsigned integer")
                    k = int(toks[i + 1][1])
                    i += 2
                powers[val] = powers.get(val, 0) + k
            else:
                raise ParseError(f"unexpected token {val!r}")
            first = False
            if i < len(toks) and toks[i] == ("op", "*"):
                i += 1
            else:
                expect_factor = False
        terms.append((coef, powers))
        if i >= len(toks):
            break
        kind, val = toks[i]
        if kind != "op" or val not in "+-":
            raise ParseError(f"expected + or -, got {val!r}")
        sign = 1 if val == "+" else -1
        i += 1
    return terms


def infer_context(names: Iterable[str]) -> Context:
    """Build a context whose families cover the given variable names."""
    fams: dict = {}
    for n in names:
        base, ix = split_var_name(n)
        fams.setdefault(base, set()).add(ix)
    out = []
    for base in sorted(fams):
        ixs = fams[base]
        kinds = {isinstance(i, tuple) for i in ixs}
        if len(kinds) > 1:
            raise ParseError(f"family {base!r} mixes flat and double indices")
        out.append(VarFamily(base, tuple(sorted(ixs))))
    return Context(out)


def parse_poly(text: str, ctx: Context | None = None) -> MultiPoly:
    """Parse the polynomial text grammar, e.g. ``"2*a0^2*a3 - 3*a0*a1*a2"``."""
    terms = _parse_terms(text)
    if ctx is None:
        ctx = infer_context(n for _, p in terms for n in p)
    n = len(ctx)
    out: dict = {}
    for c, powers in terms:
        e = [0] * n
        for name, k in powers.items():
            e[ctx.index(name)] += k
        e = tuple(e)
        out[e] = out.get(e, 0) + c
    return MultiPoly(ctx, out)


def format_scalar(c) -> str:
    return _scalar_str(qnorm(Fraction(c)))
