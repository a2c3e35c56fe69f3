"""Exact linear algebra over Z, Q and F_p.

Dense Smith normal form with unimodular transforms is used where explicit
coordinates are needed (homology presentations, integral sections).
Invariant factors and ranks of large boundary matrices go through a sparse
elimination that clears unit pivots first and only hands the small
leftover core to the dense routine.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .sparse import SparseMatrix


# --------------------------------------------------------------------------
# dense Smith normal form over Z

def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    nb = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * nb
        for k, av in enumerate(row):
            if av:
                brow = b[k]
                for j in range(nb):
                    if brow[j]:
                        acc[j] += av * brow[j]
        out.append(acc)
    return out


@dataclass
class SmithDecomposition:
    """``U @ A @ V == D`` with U, V unimodular; ``Uinv``/``Vinv`` are their inverses."""

    U: list
    D: list
    V: list
    Uinv: list
    Vinv: list

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self):
        return [d for d in self.diagonal if d]

    def check(self, A):
        if matmul(matmul(self.U, A), self.V) != self.D:
            raise AssertionError("U A V != D")
        n, m = len(self.U), len(self.V)
        if matmul(self.U, self.Uinv) != _identity(n) or matmul(self.V, self.Vinv) != _identity(m):
            raise AssertionError("transform inverses are wrong")
        diag = self.diagonal
        for i in range(len(diag)):
            for j in range(len(self.D[0])):
                if i != j and i < len(self.D) and self.D[i][j]:
                    raise AssertionError("D is not diagonal")
        nz = [d for d in diag if d]
        if any(d < 0 for d in diag) or any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
            raise AssertionError("diagonal is not a divisibility chain")
        if diag[:len(nz)] != nz:
            raise AssertionError("zeros precede nonzero invariant factors")
        return True


def smith_normal_form(A, transforms=True) -> SmithDecomposition:
    """Smith normal form of a dense integer matrix (list of rows).

    Pivot rule: the nonzero entry of smallest magnitude in the active
    submatrix, ties broken by lowest row and then lowest column.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    D = [list(map(int, row)) for row in A]
    track = transforms
    U = _identity(n) if track else None
    Uinv = _identity(n) if track else None
    V = _identity(m) if track else None
    Vinv = _identity(m) if track else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for j in range(m):
            if rs[j]:
                rd[j] += q * rs[j]
        if track:
            ud, us = U[dst], U[src]
            for j in range(n):
                if us[j]:
                    ud[j] += q * us[j]
            for row in Uinv:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            vd, vs = Vinv[dst], Vinv[src]
            for j in range(m):
                if vd[j]:
                    vs[j] -= q * vd[j]

    def negate_row(i):
        D[i] = [-v for v in D[i]]
        if track:
            U[i] = [-v for v in U[i]]
            for row in Uinv:
                row[i] = -row[i]

    t = 0
    while t < min(n, m):
        # smallest nonzero pivot in the active block
        best = None
        for i in range(t, n):
            row = D[i]
            for j in range(t, m):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = D[t][t]
            done = True
            for i in range(t + 1, n):
                v = D[i][t]
                if v:
                    q = v // piv
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, m):
                v = D[t][j]
                if v:
                    q = v // piv
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility of the rest of the block
                bad = None
                for i in range(t + 1, n):
                    row = D[i]
                    for j in range(t + 1, m):
                        if row[j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # a smaller remainder appeared in row/column t: move it to the pivot
            best = None
            for i in range(t, n):
                v = D[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, t)
            for j in range(t, m):
                v = D[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), t, j)
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithDecomposition(U, D, V, Uinv, Vinv)


def normalize_invariants(orders):
    """Turn a list of cyclic orders into an invariant-factor divisibility chain.

    Zeros (infinite cyclic) and ones are dropped; the chain is ascending.
    """
    ds = sorted(abs(d) for d in orders if abs(d) > 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a * b // g
                    changed = True
        ds = sorted(d for d in ds if d > 1)
    return ds


# --------------------------------------------------------------------------
# sparse elimination

def _row_dicts(mat: SparseMatrix):
    rows = {}
    for j, c in enumerate(mat.cols):
        for i, v in c.items():
            rows.setdefault(i, {})[j] = v
    return rows


def _to_integral(mat: SparseMatrix) -> SparseMatrix:
    """Scale a rational matrix to an integer one with the same row space rank."""
    den = 1
    for c in mat.cols:
        for v in c.values():
            if isinstance(v, Fraction) and v.denominator != 1:
                den = den * v.denominator // gcd(den, v.denominator)
    if den == 1:
        cols = [{i: int(v) for i, v in c.items()} for c in mat.cols]
        return SparseMatrix(mat.nrows, mat.ncols, cols)
    cols = [{i: int(v * den) for i, v in c.items()} for c in mat.cols]
    return SparseMatrix(mat.nrows, mat.ncols, cols)


def _eliminate(mat: SparseMatrix, p: int, unit_only: bool):
    """Eliminate pivots from a copy of ``mat``.

    Over Z (p == 0, unit_only) only +-1 pivots are used.  Over F_p any
    nonzero pivot is used.  Returns (number of pivots, leftover rows dict).
    """
    rows = _row_dicts(mat)
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    heap = [(len(s), j) for j, s in cols.items()]
    heapq.heapify(heap)
    npiv = 0

    def is_piv(v):
        return v in (1, -1) if unit_only else bool(v)

    stalled = set()
    while heap:
        cnt, c = heapq.heappop(heap)
        s = cols.get(c)
        if not s:
            continue
        if cnt != len(s):
            heapq.heappush(heap, (len(s), c))
            continue
        best = None
        for r in s:
            v = rows[r][c]
            if is_piv(v):
                key = len(rows[r])
                if best is None or key < best[0] or (key == best[0] and r < best[1]):
                    best = (key, r)
        if best is None:
            stalled.add(c)
            continue
        r = best[1]
        prow = rows.pop(r)
        pv = prow[c]
        inv = pv if p == 0 else pow(pv, -1, p)
        for j in prow:
            cols[j].discard(r)
        others = list(cols[c])
        for r2 in others:
            row2 = rows[r2]
            f = row2[c] * inv
            if p:
                f %= p
            for j, v in prow.items():
                nv = row2.get(j, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    if j not in row2:
                        cols.setdefault(j, set()).add(r2)
                        if j in stalled:
                            stalled.discard(j)
                            heapq.heappush(heap, (len(cols[j]), j))
                    row2[j] = nv
                elif j in row2:
                    del row2[j]
                    cols[j].discard(r2)
        del cols[c]
        for j in prow:
            if j in cols and j != c:
                heapq.heappush(heap, (len(cols[j]), j))
        npiv += 1
    return npiv, {i: r for i, r in rows.items() if r}


def elementary_divisors(mat: SparseMatrix):
    """Nonzero invariant factors (ascending divisibility chain) of an integer matrix."""
    if mat.p:
        raise ValueError("elementary divisors need an integer matrix")
    npiv, rest = _eliminate(mat, 0, unit_only=True)
    factors = [1] * npiv
    if rest:
        colset = sorted({j for r in rest.values() for j in r})
        cpos = {j: k for k, j in enumerate(colset)}
        dense = []
        for r in rest.values():
            row = [0] * len(colset)
            for j, v in r.items():
                row[cpos[j]] = v
            dense.append(row)
        snf = smith_normal_form(dense, transforms=False)
        factors.extend(snf.invariant_factors)
    ones = [f for f in factors if f == 1]
    return ones + normalize_invariants(f for f in factors if f != 1)


def rank(mat: SparseMatrix, p: int = 0) -> int:
    """Rank over Q (p == 0) or over F_p."""
    if p:
        m = mat if mat.p == p else mat.reduce_mod(p)
        npiv, _ = _eliminate(m, p, unit_only=False)
        return npiv
    return len(elementary_divisors(_to_integral(mat)))


# --------------------------------------------------------------------------
# field arithmetic on sparse vectors

class Field:
    """Q (p == 0, Fraction entries) or F_p (int entries in [0, p))."""

    def __init__(self, p: int = 0):
        self.p = p

    def norm(self, v):
        if self.p:
            if isinstance(v, Fraction):
                return v.numerator * pow(v.denominator, -1, self.p) % self.p
            return v % self.p
        if isinstance(v, Fraction) and v.denominator == 1:
            return int(v)
        return v

    def inv(self, v):
        if self.p:
            return pow(v, -1, self.p)
        return Fraction(1) / v if not isinstance(v, Fraction) else 1 / v

    def vec(self, d: dict) -> dict:
        out = {}
        for i, v in d.items():
            v = self.norm(v)
            if v:
                out[i] = v
        return out

    def axpy(self, y: dict, a, x: dict):
        """y += a*x in place."""
        p = self.p
        for i, xv in x.items():
            nv = y.get(i, 0) + a * xv
            if p:
                nv %= p
            elif isinstance(nv, Fraction) and nv.denominator == 1:
                nv = int(nv)
            if nv:
                y[i] = nv
            else:
                y.pop(i, None)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(self.p)


class Reducer:
    """Incremental echelon basis of a subspace of sparse vectors over a field.

    Each stored vector has as pivot its largest index.  Every stored vector
    remembers its expression in terms of the labels of the vectors added
    so far, which yields kernels and coordinates.
    """

    def __init__(self, field: Field, track=True):
        self.field = field
        self.track = track
        self.pivots: dict[int, tuple[dict, dict]] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec: dict, combo: dict | None = None):
        """Reduce ``vec`` against the basis; returns (residual, combo).

        On return ``residual == vec + sum(c[l] * added[l])`` where ``added``
        are the vectors passed to :meth:`add` under their labels (plus
        whatever ``combo`` already held).
        """
        F = self.field
        v = dict(vec)
        c = dict(combo) if combo is not None else {}
        piv = self.pivots
        while v:
            top = max(v)
            entry = piv.get(top)
            if entry is None:
                break
            bv, bc = entry
            a = v[top] * F.inv(bv[top])
            a = F.norm(-a)
            F.axpy(v, a, bv)
            if self.track:
                F.axpy(c, a, bc)
        return v, c

    def add(self, vec: dict, label=None):
        """Add a vector; returns None if independent, else the kernel combo."""
        F = self.field
        combo = {label: 1} if (self.track and label is not None) else {}
        v, c = self.reduce(F.vec(vec), combo)
        if v:
            self.pivots[max(v)] = (v, c)
            return None
        return c

    def contains(self, vec: dict) -> bool:
        v, _ = self.reduce(self.field.vec(vec))
        return not v

    def low_of(self, vec):
        v, _ = self.reduce(self.field.vec(vec))
        return max(v) if v else None


def dense_to_cols(rows, ncols=None):
    ncols = len(rows[0]) if rows else (ncols or 0)
    cols = [{} for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                cols[j][i] = v
    return cols


def nullspace(mat: SparseMatrix, field: Field):
    """Basis of the kernel of ``mat`` as sparse column vectors (over a field)."""
    red = Reducer(field)
    basis = []
    for j, c in enumerate(mat.cols):
        k = red.add(c, label=j)
        if k is not None:
            basis.append(field.vec(k))
    return basis


def column_space(vectors, field: Field):
    """Echelon basis of the span of the given vectors (list of dicts)."""
    red = Reducer(field, track=False)
    for v in vectors:
        red.add(v)
    return [v for v, _ in red.pivots.values()]


def solve_in_span(basis, targets, field: Field):
    """Coordinates of each target in terms of ``basis`` (None if not in span)."""
    red = Reducer(field)
    for k, b in enumerate(basis):
        if red.add(b, label=k) is not None:
            raise ValueError("basis vectors are linearly dependent")
    out = []
    for t in targets:
        v, c = red.reduce(field.vec(t))
        if v:
            out.append(None)
        else:
            out.append({k: field.norm(-a) for k, a in c.items() if field.norm(-a)})
    return out
