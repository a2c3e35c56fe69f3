"""Independent reference computations used only by the tests.

Everything here is written from the definitions, without calling into the
package's chain or linear-algebra code.
"""

import itertools
from fractions import Fraction

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


def sequences(n, d):
    """(x_d, ..., x_0) in index order."""
    return list(itertools.product(range(n), repeat=d + 1))


def index(seq, n):
    v = 0
    for x in seq:
        v = v * n + x
    return v


def face(ops, k, seq, i):
    """d_i^k on a sequence written (x_d, ..., x_0); returns (new sequence, x_i)."""
    d = len(seq) - 1
    xi = seq[d - i]
    left = tuple(ops[k][x][xi] for x in seq[:d - i])
    return left + seq[d - i + 1:], xi


def differential(ops, n, w, action, m, d):
    """Dense Σ_k w_k Σ_i (-1)^(d-i) d_i^k on M ⊗ C_d, basis seq-major."""
    rows, cols = m * n ** d, m * n ** (d + 1)
    D = [[0] * cols for _ in range(rows)]
    for s, seq in enumerate(sequences(n, d)):
        for k, a in enumerate(w):
            if not a:
                continue
            for i in range(d + 1):
                new, xi = face(ops, k, seq, i)
                r = index(new, n)
                A = action[k][xi]
                sign = (-1) ** (d - i)
                for t in range(m):
                    for u in range(m):
                        if A[u][t]:
                            D[r * m + u][s * m + t] += a * sign * A[u][t]
    return D


def augmentation(n, w, action, m):
    D = [[0] * (m * n) for _ in range(m)]
    for x in range(n):
        for k, a in enumerate(w):
            A = action[k][x]
            for t in range(m):
                for u in range(m):
                    D[u][x * m + t] += a * A[u][t]
    return D


def trivial_action(nops, n, m):
    eye = [[int(i == j) for j in range(m)] for i in range(m)]
    return [[eye] * n for _ in range(nops)]


def matmul(a, b):
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def rank(rows, p=0):
    """Rank by plain Gaussian elimination over Q (p = 0) or F_p."""
    a = [[Fraction(v) if not p else v % p for v in r] for r in rows]
    rk, ncols = 0, len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((r for r in range(rk, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = (1 / a[rk][c]) if not p else pow(a[rk][c], p - 2, p)
        for r in range(len(a)):
            if r != rk and a[r][c]:
                f = a[r][c] * inv
                a[r] = [(x - f * y) if not p else (x - f * y) % p for x, y in zip(a[r], a[rk])]
        rk += 1
    return rk


def invariants(rows):
    """Nonzero invariant factors of an integer matrix (via sympy)."""
    if not rows or not rows[0]:
        return []
    return [abs(int(v)) for v in invariant_factors(Matrix(rows), domain=ZZ) if v != 0]


def homology_groups(dims, diffs, degrees):
    """{d: (free rank, sorted torsion)} over Z; ``diffs[d]`` maps degree d to d-1."""
    out = {}
    for d in degrees:
        inv_out = invariants(diffs[d]) if d in diffs else []
        inv_in = invariants(diffs[d + 1]) if d + 1 in diffs else []
        free = dims[d] - len(inv_out) - len(inv_in)
        out[d] = (free, sorted(v for v in inv_in if v > 1))
    return out


def homology_dims(dims, diffs, degrees, p=0):
    out = {}
    for d in degrees:
        r_out = rank(diffs[d], p) if d in diffs and diffs[d] and diffs[d][0] else 0
        r_in = rank(diffs[d + 1], p) if d + 1 in diffs and diffs[d + 1] and diffs[d + 1][0] else 0
        out[d] = dims[d] - r_out - r_in
    return out


def level(seq):
    """Least position i with x_i = x_{i+1} (positions counted from the right)."""
    pos = seq[::-1]
    for i in range(len(pos) - 1):
        if pos[i] == pos[i + 1]:
            return i
    return None


def submatrix(D, rows, cols):
    return [[D[i][j] for j in cols] for i in rows]


def page_dims(diffs, levels, r, degrees, p=0):
    """E^r_{p,q} dimensions from E^r_p = Z^r_p / (Z^{r-1}_{p-1} + ∂ Z^{r-1}_{p+r-1}).

    ``diffs[d]`` is a dense matrix from degree d to d-1, ``levels[d]`` the
    filtration level of each basis vector of degree d.  Z^r_p is the space
    of x in F^p with ∂x in F^{p-r}.
    """
    def Z(d, s, rr):
        cols = [j for j, lv in enumerate(levels[d]) if lv <= s]
        if not cols:
            return []
        if d not in diffs:
            return [[int(j == c) for j in range(len(levels[d]))] for c in cols]
        bad_rows = [i for i, lv in enumerate(levels[d - 1]) if lv > s - rr]
        A = submatrix(diffs[d], bad_rows, cols)
        basis = nullspace(A, len(cols), p)
        out = []
        for v in basis:
            full = [0] * len(levels[d])
            for c, x in zip(cols, v):
                full[c] = x
            out.append(full)
        return out

    def boundary_of(d, vecs):
        if d not in diffs:
            return []
        D = diffs[d]
        return [[sum(D[i][j] * v[j] for j in range(len(v))) for i in range(len(D))] for v in vecs]

    out = {}
    for d in degrees:
        top = max(levels[d], default=-1)
        for s in range(0, top + 1):
            num = Z(d, s, r)
            if not num:
                continue
            den = Z(d, s - 1, r - 1) + boundary_of(d + 1, Z(d + 1, s + r - 1, r - 1)) \
                if d + 1 in levels else Z(d, s - 1, r - 1)
            dn = rank_of_vectors(num, p)
            dd = rank_of_vectors(den, p) if den else 0
            if dn - dd:
                out[(s, d - s)] = dn - dd
    return out


def rank_of_vectors(vecs, p=0):
    if not vecs:
        return 0
    return rank(vecs, p)


def nullspace(A, ncols, p=0):
    """Basis of {v : A v = 0} by reduced row echelon form."""
    a = [[Fraction(v) if not p else v % p for v in r] for r in A]
    pivots, rk = [], 0
    for c in range(ncols):
        piv = next((r for r in range(rk, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = (1 / a[rk][c]) if not p else pow(a[rk][c], p - 2, p)
        a[rk] = [x * inv if not p else x * inv % p for x in a[rk]]
        for r in range(len(a)):
            if r != rk and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) if not p else (x - f * y) % p for x, y in zip(a[r], a[rk])]
        pivots.append(c)
        rk += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fcol] if not p else (-a[r][fcol]) % p
        basis.append(v)
    return basis


def part_homology(ops, n, w, action, m, part, N, augmented=False):
    """Integral homology of the degenerate or normalized part (or the full complex).

    Degenerate sequences have some x_i = x_{i+1} and span a subcomplex;
    the normalized part is the quotient, so its differential is the block
    between nondegenerate sequences.
    """
    def keep(seq):
        deg = level(seq) is not None
        return {"full": True, "degenerate": deg, "normalized": not deg}[part]

    def basis(d):
        return [s * m + t for s, seq in enumerate(sequences(n, d)) if keep(seq) for t in range(m)]

    bases = {d: basis(d) for d in range(0, N + 2)}
    diffs = {d: submatrix(differential(ops, n, w, action, m, d), bases[d - 1], bases[d])
             for d in range(1, N + 2)}
    dims = {d: len(b) for d, b in bases.items()}
    degrees = list(range(0, N + 1))
    if augmented and part != "degenerate":
        dims[-1] = m
        diffs[0] = submatrix(augmentation(n, w, action, m), list(range(m)), bases[0])
        degrees = [-1] + degrees
    diffs = {d: D for d, D in diffs.items() if D and D[0]}
    return homology_groups(dims, diffs, degrees)


def nondegenerate_count(n, p):
    return sum(1 for seq in sequences(n, p) if level(seq) is None)
