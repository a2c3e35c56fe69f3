"""Column-major sparse matrices with exact entries.

Entries are Python ints or Fractions; when ``p`` is nonzero every entry is
kept reduced into ``[0, p)``.  Matrices act on column vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class SparseMatrix:
    __slots__ = ("nrows", "ncols", "cols", "p")

    def __init__(self, nrows: int, ncols: int, cols=None, p: int = 0):
        self.nrows = nrows
        self.ncols = ncols
        self.p = p
        if cols is None:
            cols = [{} for _ in range(ncols)]
        self.cols: list[dict] = cols

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows, ncols, p=0):
        return cls(nrows, ncols, p=p)

    @classmethod
    def identity(cls, n, p=0):
        return cls(n, n, [{i: 1} for i in range(n)], p)

    @classmethod
    def from_triples(cls, nrows, ncols, triples: Iterable, p=0):
        m = cls(nrows, ncols, p=p)
        for i, j, v in triples:
            m.add_entry(i, j, v)
        return m

    @classmethod
    def from_dense(cls, rows, ncols=None, p=0):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        m = cls(nrows, ncols, p=p)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.add_entry(i, j, v)
        return m

    def add_entry(self, i, j, v):
        col = self.cols[j]
        new = col.get(i, 0) + v
        if self.p:
            new %= self.p
        if new:
            col[i] = new
        else:
            col.pop(i, None)

    def copy(self):
        return SparseMatrix(self.nrows, self.ncols, [dict(c) for c in self.cols], self.p)

    # inspection ---------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def is_zero(self):
        return not any(self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    def triples(self):
        """Sorted (row, col, value) triples."""
        out = [(i, j, v) for j, c in enumerate(self.cols) for i, v in c.items()]
        out.sort()
        return out

    def to_dense(self):
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                rows[i][j] = v
        return rows

    def rows(self):
        """Row-major dict-of-dicts view."""
        out = {}
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out.setdefault(i, {})[j] = v
        return out

    def max_abs(self):
        return max((abs(v) for c in self.cols for v in c.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        out = self.copy()
        for j, c in enumerate(other.cols):
            for i, v in c.items():
                out.add_entry(i, j, v)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        if self.p:
            a %= self.p
        if not a:
            return SparseMatrix(self.nrows, self.ncols, p=self.p)
        p = self.p
        cols = []
        for c in self.cols:
            if p:
                cols.append({i: v * a % p for i, v in c.items()})
            else:
                cols.append({i: v * a for i, v in c.items()})
        return SparseMatrix(self.nrows, self.ncols, cols, p)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.p or other.p
        acols = self.cols
        out = []
        for bc in other.cols:
            acc = {}
            for k, bv in bc.items():
                for i, av in acols[k].items():
                    acc[i] = acc.get(i, 0) + av * bv
            if p:
                acc = {i: v % p for i, v in acc.items() if v % p}
            else:
                acc = {i: v for i, v in acc.items() if v}
            out.append(acc)
        return SparseMatrix(self.nrows, other.ncols, out, p)

    def apply(self, vec: dict) -> dict:
        """Multiply a sparse column vector given as {index: value}."""
        acc = {}
        for k, bv in vec.items():
            for i, av in self.cols[k].items():
                acc[i] = acc.get(i, 0) + av * bv
        if self.p:
            return {i: v % self.p for i, v in acc.items() if v % self.p}
        return {i: v for i, v in acc.items() if v}

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols, self.p)

    def submatrix(self, rows, cols):
        """Select rows and columns (given as index lists, in order)."""
        rpos = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            c = self.cols[j]
            out.append({rpos[i]: v for i, v in c.items() if i in rpos})
        return SparseMatrix(len(rows), len(cols), out, self.p)

    def entries_outside(self, rows, cols):
        """Triples in the given columns whose row is not in ``rows``."""
        rset = set(rows)
        bad = []
        for j in cols:
            for i, v in self.cols[j].items():
                if i not in rset:
                    bad.append((i, j, v))
        return bad

    def reduce_mod(self, p):
        cols = [{i: v % p for i, v in c.items() if v % p} for c in self._integral_cols(p)]
        return SparseMatrix(self.nrows, self.ncols, cols, p)

    def _integral_cols(self, p):
        out = []
        for c in self.cols:
            d = {}
            for i, v in c.items():
                if isinstance(v, Fraction):
                    den = v.denominator % p
                    if den == 0:
                        raise ZeroDivisionError(f"{v} has no image mod {p}")
                    v = v.numerator * pow(den, -1, p)
                d[i] = v
            out.append(d)
        return out

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return SparseMatrix(self.nrows, self.ncols + other.ncols,
                            [dict(c) for c in self.cols] + [dict(c) for c in other.cols],
                            self.p or other.p)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        off = self.nrows
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, v in b.items():
                c[i + off] = v
            cols.append(c)
        return SparseMatrix(self.nrows + other.nrows, self.ncols, cols, self.p or other.p)


def block_diag(blocks, p=0):
    nrows = sum(b.nrows for b in blocks)
    cols = []
    off = 0
    for b in blocks:
        for c in b.cols:
            cols.append({i + off: v for i, v in c.items()})
        off += b.nrows
    return SparseMatrix(nrows, len(cols), cols, p)


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Kronecker product with ``a``'s index as the more significant digit."""
    p = a.p or b.p
    cols = []
    for ac in a.cols:
        for bc in b.cols:
            c = {}
            for i, av in ac.items():
                base = i * b.nrows
                for k, bv in bc.items():
                    v = av * bv
                    if p:
                        v %= p
                    if v:
                        c[base + k] = v
            cols.append(c)
    return SparseMatrix(a.nrows * b.nrows, a.ncols * b.ncols, cols, p)
