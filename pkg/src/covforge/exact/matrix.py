"""Dense exact matrices over Q: rank, kernel, determinants, modular rank."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .poly import qnorm

# largest prime below 2**31; products of two residues fit in int64
DEFAULT_PRIME = 2147483647
SECOND_PRIME = 2147483629


class RatMatrix:
    """Row-major dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence | None = None):
        if entries is None:
            entries = [0] * (rows * cols)
        entries = [qnorm(Fraction(x)) for x in entries]
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows, self.cols, self.entries = rows, cols, entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, v):
        if isinstance(v, RatMatrix):
            if self.cols != v.rows:
                raise ValueError("shape mismatch")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(v.cols):
                    out.append(sum(r[k] * v[k, j] for k in range(self.cols)))
            return RatMatrix(self.rows, v.cols, out)
        v = list(v)
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return [qnorm(Fraction(sum(a * b for a, b in zip(self.row(i), v)))) for i in range(self.rows)]

    def __eq__(self, other):
        return (isinstance(other, RatMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"

    def rank(self) -> int:
        return matrix_rank(self)

    def kernel(self) -> list:
        return matrix_kernel(self)


def integer_rows(rows: Sequence[Sequence]) -> list:
    """Scale each row by the lcm of its denominators so all entries are ints."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def bareiss_rank(rows: list) -> int:
    """Fraction-free Gaussian elimination on integer rows; returns the rank.

    ``rows`` is consumed.
    """
    m = [r for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        pc = p[c]
        for i in range(rank + 1, len(m)):
            r = m[i]
            rc = r[c]
            if rc:
                m[i] = [(pc * r[k] - rc * p[k]) // prev for k in range(ncols)]
            elif pc != prev:
                m[i] = [(pc * x) // prev for x in r]
        prev = pc
        rank += 1
        if rank == len(m):
            break
    return rank


def matrix_rank(M: RatMatrix) -> int:
    """Exact rank over Q via fraction-free elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    rows = M.to_rows()
    if M.cols < M.rows:
        rows = [list(c) for c in zip(*rows)]
    return bareiss_rank(integer_rows(rows))


def rref(rows: list) -> tuple:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_kernel(M: RatMatrix) -> list:
    """Basis of {v : M v = 0}, one vector per free column, read off the RREF."""
    red, pivots = rref(M.to_rows())
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append([qnorm(x) for x in v])
    return basis


def left_kernel(rows: list, ncols: int) -> list:
    """Basis of {w : w^T A = 0} for A given as a list of rows."""
    if not rows:
        return []
    At = RatMatrix(ncols, len(rows), [rows[i][j] for j in range(ncols) for i in range(len(rows))])
    return matrix_kernel(At)


def modular_rank(rows: Sequence[Sequence], p: int = DEFAULT_PRIME) -> int:
    """Rank of a rational matrix reduced mod a prime ``p`` (p < 2**31).

    This never exceeds the rank over Q when no denominator is divisible by p.
    """
    if not len(rows):
        return 0
    ints = integer_rows(rows)
    A = np.array([[x % p for x in r] for r in ints], dtype=np.int64)
    return modular_rank_array(A, p)


def modular_rank_array(A: np.ndarray, p: int = DEFAULT_PRIME) -> int:
    A = A % p
    nrows, ncols = A.shape
    if nrows > ncols:
        A = A.T.copy()
        nrows, ncols = ncols, nrows
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        col = A[rank:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, c]), p - 2, p)
        A[rank] = (A[rank] * inv) % p
        below = A[rank + 1:, c]
        idx = np.flatnonzero(below)
        if idx.size:
            rr = rank + 1 + idx
            A[rr] = (A[rr] - np.outer(A[rr, c], A[rank]) % p) % p
        rank += 1
    return rank


def det(matrix: Sequence[Sequence], zero, one):
    """Determinant by cofactor expansion with memoised minors.

    Works for any commutative ring elements supporting +, -, *.
    """
    n = len(matrix)
    if n == 0:
        return one
    memo = {}

    def minor(row: int, cols: tuple):
        if row == n:
            return one
        key = cols
        if key in memo:
            return memo[key]
        total = zero
        for k, c in enumerate(cols):
            entry = matrix[row][c]
            if entry == 0:
                continue
            rest = minor(row + 1, cols[:k] + cols[k + 1:])
            term = entry * rest
            total = total + term if k % 2 == 0 else total - term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def rational_det(M: RatMatrix) -> Fraction:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    red = [[Fraction(x) for x in r] for r in M.to_rows()]
    n = M.rows
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if red[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            red[c], red[piv] = red[piv], red[c]
            sign = -sign
        d *= red[c][c]
        for i in range(c + 1, n):
            if red[i][c]:
                f = red[i][c] / red[c][c]
                red[i] = [a - f * b for a, b in zip(red[i], red[c])]
    return qnorm(sign * d)


def primitive(vec: Sequence) -> list:
    """Scale a rational vector to coprime integers with positive leading entry."""
    ints = integer_rows([vec])[0]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return [x // g for x in ints]
