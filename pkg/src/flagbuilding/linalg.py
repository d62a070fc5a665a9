"""Exact dense linear algebra over ordered field scalars.

Works over Fraction or ValuedScalar entries.  Elimination is fraction-free
(Bareiss): ValuedScalar rows are cleared to GenPoly numerators first, so
intermediate entries are minors of the cleared matrix instead of towering
unreduced fractions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .valfield import GenPoly, ValuedScalar, as_scalar


class LinAlgError(ValueError):
    pass


class Matrix:
    """Immutable dense matrix; entries all Fraction or all ValuedScalar."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(entries)
        if rows <= 0 or cols <= 0:
            raise LinAlgError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise LinAlgError("entry count does not match dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rowlist) -> "Matrix":
        rowlist = [list(r) for r in rowlist]
        cols = len(rowlist[0])
        if any(len(r) != cols for r in rowlist):
            raise LinAlgError("ragged rows")
        return cls(len(rowlist), cols, [x for r in rowlist for x in r])

    @classmethod
    def from_cols(cls, collist) -> "Matrix":
        collist = [list(c) for c in collist]
        return cls.from_rows(zip(*collist))

    @classmethod
    def identity(cls, n: int, one=None) -> "Matrix":
        one = ValuedScalar.one() if one is None else one
        zero = one - one
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j):
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def row_lists(self):
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(len(row_idx), len(col_idx),
                      [self[i, j] for i in row_idx for j in col_idx])

    def take_cols(self, ncols: int) -> "Matrix":
        return self.submatrix(range(self.rows), range(ncols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise LinAlgError("hstack: row counts differ")
        return Matrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)])

    def map(self, fn) -> "Matrix":
        return Matrix(self.rows, self.cols, [fn(x) for x in self.entries])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError("matmul: inner dimensions differ")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = ri[0] * other[0, j]
                for k in range(1, self.cols):
                    acc = acc + ri[k] * other[k, j]
                out.append(acc)
        return Matrix(self.rows, other.cols, out)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinAlgError("add: shapes differ")
        return Matrix(self.rows, self.cols,
                      [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinAlgError("sub: shapes differ")
        return Matrix(self.rows, self.cols,
                      [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "Matrix":
        return self.map(lambda x: x * c)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(a == b for a, b in zip(self.entries, other.entries))

    def __repr__(self):
        body = "; ".join(", ".join(repr(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix[{body}]"

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols,
                "entries": [_scalar_to_json(x) for x in self.entries]}

    @classmethod
    def from_json(cls, data):
        return cls(data["rows"], data["cols"],
                   [ValuedScalar.from_json(x) for x in data["entries"]])


def _scalar_to_json(x):
    return as_scalar(x).to_json() if not isinstance(x, ValuedScalar) else x.to_json()


# ---------------------------------------------------------------------------
# fraction-free elimination core
#
# A matrix over the field is cleared row by row to a matrix over a domain
# where exact division is available: GenPoly for ValuedScalar entries,
# Fraction (trivially) for rational entries.


def _is_valued(entries) -> bool:
    return any(isinstance(x, ValuedScalar) for x in entries)


def _clear_rows(M: Matrix):
    """Return (domain rows, per-row factors, embed, ops) for Bareiss.

    Distinct denominators are collected once per row; repeated denominators
    (ubiquitous after inversions, where whole columns share one) do not
    inflate the clearing factor.
    """
    if _is_valued(M.entries):
        one = GenPoly.one()
        rows, factors = [], []
        for i in range(M.rows):
            row = [as_scalar(x) for x in M.row(i)]
            distinct = []
            seen = set()
            for x in row:
                if x.den != one and x.den.terms not in seen:
                    seen.add(x.den.terms)
                    distinct.append(x.den)
            n = len(distinct)
            prefix = [one] * (n + 1)
            for k, p in enumerate(distinct):
                prefix[k + 1] = prefix[k] * p
            suffix = [one] * (n + 1)
            for k in range(n - 1, -1, -1):
                suffix[k] = distinct[k] * suffix[k + 1]
            lookup = {p.terms: prefix[k] * suffix[k + 1] for k, p in enumerate(distinct)}
            cleared = []
            for x in row:
                if x.den == one:
                    cleared.append(x.num * prefix[n])
                else:
                    cleared.append(x.num * lookup[x.den.terms])
            rows.append(cleared)
            factors.append(prefix[n])
        ops = _GenPolyOps
        embed = lambda p: ValuedScalar(p)
    else:
        rows = [[Fraction(x) for x in M.row(i)] for i in range(M.rows)]
        factors = [Fraction(1)] * M.rows
        ops = _FractionOps
        embed = lambda q: q
    return rows, factors, embed, ops


class _GenPolyOps:
    one = GenPoly.one()

    @staticmethod
    def is_zero(p):
        return p.is_zero()

    @staticmethod
    def exact_div(a, b):
        return a.exact_div(b)

    @staticmethod
    def size(p):
        return len(p.terms)


class _FractionOps:
    one = Fraction(1)

    @staticmethod
    def is_zero(q):
        return q == 0

    @staticmethod
    def exact_div(a, b):
        return a / b

    @staticmethod
    def size(q):
        return abs(q.numerator).bit_length() + q.denominator.bit_length()


def determinant(M: Matrix):
    """Exact determinant via fraction-free elimination with full pivoting."""
    if M.rows != M.cols:
        raise LinAlgError("determinant of a non-square matrix")
    n = M.rows
    valued = _is_valued(M.entries)
    rows, factors, _embed, ops = _clear_rows(M)
    sign = 1
    prev = ops.one
    for k in range(n - 1):
        pivot = None
        for i in range(k, n):
            for j in range(k, n):
                if not ops.is_zero(rows[i][j]):
                    if pivot is None or ops.size(rows[i][j]) < pivot[0]:
                        pivot = (ops.size(rows[i][j]), i, j)
        if pivot is None:
            return ValuedScalar.zero() if valued else Fraction(0)
        _, pi, pj = pivot
        if pi != k:
            rows[pi], rows[k] = rows[k], rows[pi]
            sign = -sign
        if pj != k:
            for r in rows:
                r[pj], r[k] = r[k], r[pj]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            for j in range(k + 1, n):
                rows[i][j] = ops.exact_div(rows[i][j] * p - rik * rows[k][j], prev)
        prev = p
    det_dom = rows[n - 1][n - 1] if sign > 0 else -rows[n - 1][n - 1]
    if valued:
        denom = GenPoly.one()
        for f in factors:
            denom = denom * f
        return ValuedScalar(det_dom, denom)
    out = det_dom
    for f in factors:
        out = out / f
    return out


def _row_echelon(M: Matrix):
    """Fraction-free row echelon form over the cleared domain.

    Returns (rows, pivots, embed, ops); pivots is a list of (row, col)
    positions.  Row scalings do not change rank, kernels, or solution sets.
    """
    rows, _factors, embed, ops = _clear_rows(M)
    n, m = M.rows, M.cols
    pivots = []
    prev = ops.one
    r = 0
    for c in range(m):
        if r >= n:
            break
        best = None
        for i in range(r, n):
            if not ops.is_zero(rows[i][c]):
                if best is None or ops.size(rows[i][c]) < best[0]:
                    best = (ops.size(rows[i][c]), i)
        if best is None:
            continue
        i = best[1]
        if i != r:
            rows[i], rows[r] = rows[r], rows[i]
        p = rows[r][c]
        for i in range(r + 1, n):
            ric = rows[i][c]
            for j in range(c, m):
                rows[i][j] = ops.exact_div(rows[i][j] * p - ric * rows[r][j], prev)
        prev = p
        pivots.append((r, c))
        r += 1
    return rows, pivots, embed, ops


def rank(M: Matrix) -> int:
    _, pivots, _, _ = _row_echelon(M)
    return len(pivots)


def pivot_columns(M: Matrix) -> list:
    """Lexicographically first independent column set (intrinsic to the
    column matroid, independent of pivot row choices)."""
    _, pivots, _, _ = _row_echelon(M)
    return [c for _, c in pivots]


def kernel_basis(M: Matrix) -> Matrix | None:
    """Matrix whose columns span the null space, or None if it is trivial."""
    rows, pivots, embed, ops = _row_echelon(M)
    m = M.cols
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(m) if c not in pivot_cols]
    if not free_cols:
        return None
    zero = embed(ops.one - ops.one)
    one = embed(ops.one)
    basis_cols = []
    for f in free_cols:
        x = [zero] * m
        x[f] = one
        for r, c in reversed(pivots):
            acc = zero
            for j in range(c + 1, m):
                if not ops.is_zero(rows[r][j]):
                    acc = acc + embed(rows[r][j]) * x[j]
            x[c] = -acc / embed(rows[r][c])
        basis_cols.append(x)
    return Matrix.from_cols(basis_cols)


def solve_many(A: Matrix, B: Matrix) -> Matrix:
    """Unique exact solution X of A X = B; raises LinAlgError otherwise."""
    if B.rows != A.rows:
        raise LinAlgError("solve: right-hand side shape mismatch")
    aug = A.hstack(B)
    rows, pivots, embed, ops = _row_echelon(aug)
    m = A.cols
    if any(c >= m for _, c in pivots):
        raise LinAlgError("solve: inconsistent system")
    if len(pivots) < m:
        raise LinAlgError("solve: system does not have a unique solution")
    zero = embed(ops.one - ops.one)
    out_cols = []
    for k in range(B.cols):
        x = [zero] * m
        for r, c in reversed(pivots):
            acc = embed(rows[r][m + k])
            for j in range(c + 1, m):
                if not ops.is_zero(rows[r][j]):
                    acc = acc - embed(rows[r][j]) * x[j]
            x[c] = acc / embed(rows[r][c])
        out_cols.append(x)
    return Matrix.from_cols(out_cols)


def solve(A: Matrix, b) -> list:
    """Unique exact solution of A x = b; raises LinAlgError otherwise."""
    bvec = list(b)
    if len(bvec) != A.rows:
        raise LinAlgError("solve: right-hand side length mismatch")
    return solve_many(A, Matrix.from_cols([bvec])).col(0)


def invert(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise LinAlgError("inverse of a non-square matrix")
    one = ValuedScalar.one() if _is_valued(M.entries) else Fraction(1)
    return solve_many(M, Matrix.identity(M.rows, one))


def rref(M: Matrix):
    """Reduced row echelon form over the field, with its pivot columns.

    Entries of the result are single canonical fractions of echelon minors,
    which keeps representatives small; used to canonicalize flag bases.
    """
    rows, pivots, embed, ops = _row_echelon(M)
    if not pivots:
        return None, []
    frows = []
    for r, c in pivots:
        inv_piv = embed(rows[r][c])
        frows.append([embed(rows[r][j]) / inv_piv for j in range(M.cols)])
    for idx in range(len(pivots) - 1, -1, -1):
        _, c = pivots[idx]
        for above in range(idx):
            factor = frows[above][c]
            if not _entry_is_zero(factor):
                frows[above] = [a - factor * b for a, b in zip(frows[above], frows[idx])]
    return Matrix.from_rows(frows), [c for _, c in pivots]


def _entry_is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, ValuedScalar) else x == 0


# ---------------------------------------------------------------------------
# total positivity

#: minor enumeration is exponential; sizes beyond this are refused.
MAX_MINOR_DIM = 8


def iter_minors(M: Matrix):
    """Yield ((rows, cols), value) over all k x k minors, k = 1..min(r,c)."""
    if min(M.rows, M.cols) > MAX_MINOR_DIM:
        raise LinAlgError(f"minor enumeration capped at dimension {MAX_MINOR_DIM}")
    for k in range(1, min(M.rows, M.cols) + 1):
        for ridx in itertools.combinations(range(M.rows), k):
            for cidx in itertools.combinations(range(M.cols), k):
                yield (ridx, cidx), determinant(M.submatrix(ridx, cidx))


def _minor_sign(x) -> int:
    return x.sign() if isinstance(x, ValuedScalar) else (0 if x == 0 else (1 if x > 0 else -1))


def is_totally_nonnegative(M: Matrix) -> bool:
    return all(_minor_sign(v) >= 0 for _, v in iter_minors(M))


def is_totally_positive(M: Matrix) -> bool:
    return all(_minor_sign(v) > 0 for _, v in iter_minors(M))
