"""Graded pieces of the ideals J, g and I_X in R = Q[a0..ad].

Every generator used here is isobaric, so each graded piece splits into
blocks by isobaric weight and all ranks are computed block by block.
Spanning rows are kept sparse (column -> rational).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .binary import BinaryForm, coefficient_context
from .exact import MonomialImages, MultiPoly, det
from .exact.matrix import DEFAULT_PRIME, bareiss_rank, integer_rows, matrix_kernel, modular_rank_array, RatMatrix
from .goettingen import hilbert_covariant
from .powers import alpha_matrix_generic

DEFAULT_MAX_DIM = 20000
# above this ambient dimension ranks are computed mod p first
MODULAR_THRESHOLD = 2000


class InfeasibleError(RuntimeError):
    pass


def max_dim() -> int:
    return int(os.environ.get("COVFORGE_MAX_DIM", DEFAULT_MAX_DIM))


def ambient_dim(d: int, m: int) -> int:
    return comb(d + m, d)


@lru_cache(maxsize=None)
def monomial_basis(d: int, m: int) -> tuple:
    """Exponent vectors of degree m in d+1 variables, descending lex."""
    out = []
    for combo in itertools.combinations_with_replacement(range(d + 1), m):
        e = [0] * (d + 1)
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


def weight(e: tuple) -> int:
    return sum(i * k for i, k in enumerate(e))


# -- rank helpers ---------------------------------------------------------------------

def _dense_block(rows: list, cols: list) -> list:
    pos = {c: i for i, c in enumerate(cols)}
    out = []
    for r in rows:
        v = [0] * len(cols)
        for c, x in r.items():
            v[pos[c]] = x
        out.append(v)
    return out


def exact_rank(rows: list, cols: list) -> int:
    if not rows or not cols:
        return 0
    M = _dense_block(rows, cols)
    if len(cols) < len(M):
        M = [list(c) for c in zip(*M)]
    return bareiss_rank(integer_rows(M))


def mod_rank(rows: list, cols: list, p: int = DEFAULT_PRIME) -> int:
    """Rank mod p; never exceeds the rank over Q."""
    if not rows or not cols:
        return 0
    pos = {c: i for i, c in enumerate(cols)}
    A = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, r in enumerate(rows):
        for c, x in r.items():
            x = Fraction(x)
            if x.denominator % p == 0:
                raise ArithmeticError("prime divides a denominator")
            A[i, pos[c]] = x.numerator * pow(x.denominator, -1, p) % p
    return modular_rank_array(A, p)


# -- graded pieces -----------------------------------------------------------------------

@dataclass
class GradedPiece:
    """A subspace of R_m given by sparse spanning rows over the monomial basis."""

    d: int
    m: int
    rows: list
    label: str = ""
    _ranks: dict = field(default_factory=dict, repr=False)

    @property
    def basis(self) -> tuple:
        return monomial_basis(self.d, self.m)

    @property
    def ambient(self) -> tuple:
        return (self.d, self.m)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis)

    def weight_columns(self) -> dict:
        return _weight_columns(self.d, self.m)

    def blocks(self) -> dict:
        wcol = _column_weights(self.d, self.m)
        out: dict = {}
        for r in self.rows:
            if not r:
                continue
            w = wcol[next(iter(r))]
            out.setdefault(w, []).append(r)
        return out

    def block_rank(self, w: int, method: str = "exact") -> int:
        key = (w, method)
        if key not in self._ranks:
            rows = self.blocks().get(w, [])
            cols = self.weight_columns().get(w, [])
            self._ranks[key] = exact_rank(rows, cols) if method == "exact" else mod_rank(rows, cols)
        return self._ranks[key]

    def rank(self, method: str = "auto") -> int:
        if method == "auto":
            method = "exact" if self.ambient_dim <= MODULAR_THRESHOLD else "modular"
        return sum(self.block_rank(w, method) for w in self.blocks())

    @property
    def dim(self) -> int:
        return self.rank()

    def span_matrix(self) -> RatMatrix:
        n = self.ambient_dim
        ents = []
        for r in self.rows:
            v = [0] * n
            for c, x in r.items():
                v[c] = x
            ents.extend(v)
        return RatMatrix(len(self.rows), n, ents)


@lru_cache(maxsize=None)
def _column_weights(d: int, m: int) -> tuple:
    return tuple(weight(e) for e in monomial_basis(d, m))


@lru_cache(maxsize=None)
def _weight_columns(d: int, m: int) -> dict:
    out: dict = {}
    for i, w in enumerate(_column_weights(d, m)):
        out.setdefault(w, []).append(i)
    return out


@lru_cache(maxsize=None)
def _basis_index(d: int, m: int) -> dict:
    return {e: i for i, e in enumerate(monomial_basis(d, m))}


def _check_feasible(d: int, m: int, limit: int | None = None):
    limit = max_dim() if limit is None else limit
    n = ambient_dim(d, m)
    if n > limit:
        raise InfeasibleError(f"dim R_{m} = {n} exceeds the limit {limit} (set COVFORGE_MAX_DIM)")


def multiples_piece(gens: list, d: int, m: int, label: str = "") -> GradedPiece:
    """Span of all (monomial) * g in degree m for homogeneous generators g."""
    _check_feasible(d, m)
    idx = _basis_index(d, m)
    rows = []
    for g in gens:
        if g.is_zero():
            continue
        deg = next(iter(g.degrees_in("a")))
        if deg > m:
            continue
        terms = list(g.terms.items())
        for mono in monomial_basis(d, m - deg):
            row = {}
            for e, c in terms:
                row[idx[tuple(a + b for a, b in zip(e, mono))]] = c
            rows.append(row)
    return GradedPiece(d, m, rows, label)


def j_generators(r: int, d: int) -> list:
    return [c for c in hilbert_covariant(r, d).coeffs if not c.is_zero()]


def j_piece(r: int, d: int, m: int) -> GradedPiece:
    """J_m: span of monomial multiples of the coefficients of Hilb_{r,d}."""
    return multiples_piece(j_generators(r, d), d, m, f"J_{r},{d}")


@lru_cache(maxsize=None)
def g_generators(r: int, d: int) -> tuple:
    """Maximal minors of the generic matrix of alpha_F."""
    M = alpha_matrix_generic(BinaryForm.generic(d), r)
    ctx = coefficient_context("a", d)
    zero, one = MultiPoly.zero(ctx), MultiPoly.const(ctx, 1)
    out = []
    for rows in itertools.combinations(range(len(M)), r + 1):
        D = det([[M[i][j].extend(ctx) for j in range(r + 1)] for i in rows], zero, one)
        if not D.is_zero():
            out.append(D)
    return tuple(out)


def g_piece(r: int, d: int, m: int) -> GradedPiece:
    return multiples_piece(list(g_generators(r, d)), d, m, f"g_{r},{d}")


# -- I_X as the kernel of the power map -------------------------------------------------------

@lru_cache(maxsize=None)
def power_map(e: int, d: int) -> MonomialImages:
    """a_i -> i-th Cayley coefficient of G^mu, G generic of order e in q0..qe."""
    if e < 1 or d % e:
        raise ValueError(f"e = {e} must divide d = {d}")
    G = BinaryForm.generic(e, "q")
    P = G ** (d // e)
    src = coefficient_context("a", d)
    return MonomialImages(src, {f"a{i}": P.coeffs[i] for i in range(d + 1)}, G.cctx)


class IxPiece(GradedPiece):
    """(I_X)_m for X = X_{e,d}: the kernel of R_m -> Q[q] under the power map."""

    def __init__(self, e: int, d: int, m: int):
        _check_feasible(d, m)
        super().__init__(d, m, [], f"I_X{e},{d}")
        self.e = e
        self.images = power_map(e, d)
        self._image_rows = None
        self._kernel_rows = None

    def image_rows(self) -> list:
        """Row i: image of the i-th basis monomial, over q-monomial keys."""
        if self._image_rows is None:
            self._image_rows = [self.images.image(mono).terms for mono in self.basis]
        return self._image_rows

    def _image_block(self, w: int):
        cols = self.weight_columns().get(w, [])
        rows = [self.image_rows()[i] for i in cols]
        qcols = sorted({k for r in rows for k in r})
        return rows, qcols

    def image_block_rank(self, w: int, method: str = "exact") -> int:
        key = ("img", w, method)
        if key not in self._ranks:
            rows, qcols = self._image_block(w)
            self._ranks[key] = exact_rank(rows, qcols) if method == "exact" else mod_rank(rows, qcols)
        return self._ranks[key]

    def block_rank(self, w: int, method: str = "exact") -> int:
        return len(self.weight_columns().get(w, [])) - self.image_block_rank(w, method)

    def rank(self, method: str = "auto") -> int:
        if method == "auto":
            method = "exact" if self.ambient_dim <= MODULAR_THRESHOLD else "modular"
        return sum(self.block_rank(w, method) for w in self.weight_columns())

    def blocks(self) -> dict:
        out: dict = {}
        wcol = _column_weights(self.d, self.m)
        for r in self.rows:
            out.setdefault(wcol[next(iter(r))], []).append(r)
        return out

    @property
    def rows(self):
        if self._kernel_rows is None:
            self._kernel_rows = self._compute_kernel()
        return self._kernel_rows

    @rows.setter
    def rows(self, value):
        pass

    def _compute_kernel(self) -> list:
        out = []
        for w, cols in self.weight_columns().items():
            rows, qcols = self._image_block(w)
            if not qcols:
                basis = [[1 if i == j else 0 for j in range(len(cols))] for i in range(len(cols))]
            else:
                # kernel of the transpose: combinations of monomials mapping to zero
                T = RatMatrix(len(qcols), len(cols),
                              [rows[j].get(qc, 0) for qc in qcols for j in range(len(cols))])
                basis = matrix_kernel(T)
            for v in basis:
                out.append({cols[j]: x for j, x in enumerate(v) if x})
        return out

    def contains_rows(self, rows: list) -> bool:
        """Every row maps to zero under the power map."""
        imgs = self.image_rows()
        for r in rows:
            acc: dict = {}
            for c, x in r.items():
                for k, v in imgs[c].items():
                    acc[k] = acc.get(k, 0) + x * v
            if any(acc.values()):
                return False
        return True


def ix_piece(e: int, d: int, m: int) -> IxPiece:
    return IxPiece(e, d, m)


# -- comparisons -----------------------------------------------------------------------------------

@dataclass
class Comparison:
    relation: str  # "equal", "A<B", "B<A", "incomparable"
    dim_a: int
    dim_b: int
    dim_sum: int

    def to_json(self) -> dict:
        return {"relation": self.relation, "dim_a": self.dim_a, "dim_b": self.dim_b,
                "dim_sum": self.dim_sum}


def _contained(A: GradedPiece, B: GradedPiece) -> bool:
    if isinstance(B, IxPiece):
        return B.contains_rows(A.rows)
    bA, bB = A.blocks(), B.blocks()
    wc = A.weight_columns()
    for w, rows in bA.items():
        rb = bB.get(w, [])
        if exact_rank(rb + rows, wc[w]) != exact_rank(rb, wc[w]):
            return False
    return True


def compare_pieces(A: GradedPiece, B: GradedPiece) -> Comparison:
    """Decide containment by ranks of stacked weight blocks (exact)."""
    if A.ambient != B.ambient:
        raise ValueError(f"ambient mismatch {A.ambient} vs {B.ambient}")
    da, db = A.rank("exact"), B.rank("exact")
    a_in_b = _contained(A, B)
    b_in_a = _contained(B, A)
    if a_in_b and b_in_a:
        rel, s = "equal", da
    elif a_in_b:
        rel, s = "A<B", db
    elif b_in_a:
        rel, s = "B<A", da
    else:
        rel = "incomparable"
        bA, bB = A.blocks(), B.blocks()
        wc = A.weight_columns()
        s = sum(exact_rank(bA.get(w, []) + bB.get(w, []), wc[w]) for w in wc)
    return Comparison(rel, da, db, s)


def ideal_containment(r1: int, r2: int, d: int) -> bool:
    """J_{r1,d} contains J_{r2,d}: each generator h_k of the latter lies in
    the degree-(r2+1) piece of the former."""
    gens = j_generators(r2, d)
    if not gens:
        return True
    m = r2 + 1
    if m < r1 + 1:
        return False
    P = j_piece(r1, d, m)
    G = multiples_piece(gens, d, m)
    return _contained(G, P)


# -- saturation ---------------------------------------------------------------------------------------

@dataclass
class ScanRow:
    m: int
    dim_J: int
    dim_IX: int
    equal: bool


@dataclass
class ScanReport:
    r: int
    d: int
    m_max: int
    rows: list
    candidate_si: int | None

    def to_json(self) -> dict:
        return {"r": self.r, "d": self.d, "max_degree": self.m_max,
                "candidate_si": self.candidate_si, "verified_up_to": self.m_max,
                "rows": [{"m": x.m, "dim_J": x.dim_J, "dim_IX": x.dim_IX, "equal": x.equal}
                         for x in self.rows]}

    def to_csv(self) -> str:
        out = ["m,dim_J,dim_IX,equal"]
        out += [f"{x.m},{x.dim_J},{x.dim_IX},{str(x.equal).lower()}" for x in self.rows]
        return "\n".join(out) + "\n"


def compare_j_ix(r: int, d: int, m: int) -> ScanRow:
    """dim J_m and dim (I_X)_m with X = X_{r,d}, exact.

    Block by block: J_w is inside (I_X)_w, so when rank_p(J_w) equals
    dim_w - rank_p(image_w) the chain rank_p(J) <= rank(J) <= dim I_X <=
    dim_w - rank_p(image) collapses and both numbers are exact.  Only
    blocks where the modular counts differ are recomputed over Q.
    """
    J = j_piece(r, d, m)
    X = ix_piece(r, d, m)
    if not X.contains_rows(J.rows):
        raise AssertionError("J is not inside I_X")
    small = J.ambient_dim <= MODULAR_THRESHOLD
    dj = dx = 0
    for w in X.weight_columns():
        if small:
            a, b = J.block_rank(w, "exact"), X.block_rank(w, "exact")
        else:
            a, b = J.block_rank(w, "modular"), X.block_rank(w, "modular")
            if a != b:
                a, b = J.block_rank(w, "exact"), X.block_rank(w, "exact")
        dj += a
        dx += b
    return ScanRow(m, dj, dx, dj == dx)


def saturation_scan(r: int, d: int, m_max: int, limit: int | None = None) -> ScanReport:
    if d % r:
        raise ValueError("saturation scan needs r to divide d")
    for m in range(r + 1, m_max + 1):
        _check_feasible(d, m, limit)
    rows = [compare_j_ix(r, d, m) for m in range(r + 1, m_max + 1)]
    si = None
    for row in reversed(rows):
        if not row.equal:
            break
        si = row.m
    return ScanReport(r, d, m_max, rows, si)


def saturation_lemma_check(r: int, d: int) -> bool:
    """The coefficient of a0^r a_k in h_{k-r-1} is nonzero for r+1 <= k <= d."""
    if r + 1 > d:
        raise ValueError("need r + 1 <= d")
    H = hilbert_covariant(r, d)
    for k in range(r + 1, d + 1):
        e = [0] * (d + 1)
        e[0] = r
        e[k] += 1
        if not H.coeffs[k - r - 1].terms.get(tuple(e)):
            return False
    return True
